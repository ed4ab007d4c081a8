#include "hartree_tools/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

namespace hartree::tools {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

nlohmann::json norms_json(const NormSample& s) {
    return {{"t", s.t}, {"linf", s.linf}, {"ls", s.ls}, {"qsc", s.qsc}, {"mass", s.mass}};
}

void write_series(const std::filesystem::path& path, const std::vector<NormSample>& series) {
    auto out = open_output(path);
    out << "t,ls,linf,qsc,mass,min\n";
    for (const auto& s : series)
        out << format_number(s.t) << ',' << format_number(s.ls) << ',' << format_number(s.linf) << ','
            << format_number(s.qsc) << ',' << format_number(s.mass) << ',' << format_number(s.min) << '\n';
}

// Cartesian product in declaration order, last axis fastest.
std::vector<std::vector<double>> cartesian(const std::vector<SweepAxis>& axes) {
    std::vector<std::vector<double>> points{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<double>> next;
        next.reserve(points.size() * axis.values.size());
        for (const auto& p : points)
            for (double v : axis.values) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

SweepRow run_point(const ExperimentConfig& base, const std::vector<double>& point) {
    SweepRow row;
    row.point = point;
    try {
        ExperimentConfig cfg = base;
        for (std::size_t i = 0; i < point.size(); ++i)
            cfg = cfg.with_value(base.axes()[i].section, base.axes()[i].key, point[i]);
        const ProblemSpec spec = build_problem(cfg);
        // Kernels outside the classifier's range (e.g. constant) still run.
        try {
            const RegimeClassification regime = classify(cfg);
            row.label = to_string(regime.label);
            row.p_star = regime.p_star;
            row.p_upper = regime.p_upper;
            row.q_sc = regime.q_sc;
        } catch (const ConfigError&) {
            row.label = "unclassified";
            row.q_sc = spec.critical_lebesgue_index();
        }
        const RunOutcome outcome = integrate(spec);
        row.status = to_string(outcome.status);
        row.blowup_time = outcome.blowup_time;
        if (!outcome.series.empty()) row.final_norms = outcome.series.back();
    } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
    }
    return row;
}

}  // namespace

nlohmann::json simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    const ProblemSpec spec = build_problem(config);
    const OutputSettings settings = output_settings(config);
    const RunOutcome outcome = integrate(spec);

    const std::string series_name = settings.prefix + "_series.csv";
    write_series(out_dir / series_name, outcome.series);

    nlohmann::json doc;
    doc["version"] = version;
    doc["config"] = config.resolved();
    doc["digest"] = outcome.digest;
    doc["status"] = to_string(outcome.status);
    if (outcome.blowup_time) doc["blowup_time"] = *outcome.blowup_time;
    const NormSample last = outcome.series.empty() ? NormSample{} : outcome.series.back();
    doc["final_norms"] = norms_json(last);
    doc["series_file"] = series_name;
    doc["steps"] = {{"taken", outcome.steps_taken}, {"rejected", outcome.steps_rejected}};
    auto out = open_output(out_dir / (settings.prefix + ".json"));
    out << doc.dump(2) << '\n';
    return doc;
}

std::vector<std::vector<double>> sweep_points(const ExperimentConfig& config) { return cartesian(config.axes()); }

SweepResult sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::size_t workers) {
    // Surface configuration errors in the base document before any run starts.
    (void)build_problem(config);
    const OutputSettings settings = output_settings(config);
    const auto points = sweep_points(config);

    SweepResult result;
    for (const auto& axis : config.axes()) result.axis_names.push_back(axis.name());
    result.rows.reserve(points.size());

    std::atomic<std::size_t> next{0};
    std::mutex guard;
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            SweepRow row = run_point(config, points[i]);
            const std::lock_guard lock(guard);
            result.rows.push_back(std::move(row));
        }
    };
    const std::size_t pool = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(points.size(), 1));
    std::vector<std::jthread> threads;
    for (std::size_t w = 1; w < pool; ++w) threads.emplace_back(work);
    work();
    threads.clear();
    std::sort(result.rows.begin(), result.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.point < b.point; });

    auto csv = open_output(out_dir / (settings.prefix + "_sweep.csv"));
    for (const auto& name : result.axis_names) csv << name << ',';
    csv << "label,p_star,p_upper,q_sc,status,blowup_time,t_final,linf,ls,qsc,mass,error\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : result.rows) {
        for (double v : row.point) csv << format_number(v) << ',';
        std::string error = row.error;
        std::replace(error.begin(), error.end(), ',', ';');
        std::replace(error.begin(), error.end(), '\n', ' ');
        const auto& f = row.final_norms;
        csv << row.label << ',' << format_number(row.p_star) << ',' << format_number(row.p_upper) << ','
            << format_number(row.q_sc) << ',' << row.status << ','
            << (row.blowup_time ? format_number(*row.blowup_time) : "") << ',' << format_number(f.t) << ','
            << format_number(f.linf) << ',' << format_number(f.ls) << ',' << format_number(f.qsc) << ','
            << format_number(f.mass) << ',' << error << '\n';

        nlohmann::json j;
        nlohmann::json point = nlohmann::json::object();
        for (std::size_t i = 0; i < row.point.size(); ++i) point[result.axis_names[i]] = row.point[i];
        j["point"] = point;
        j["label"] = row.label;
        j["p_star"] = row.p_star;
        j["p_upper"] = row.p_upper;
        j["q_sc"] = row.q_sc;
        j["status"] = row.status;
        if (row.blowup_time) j["blowup_time"] = *row.blowup_time;
        j["final_norms"] = norms_json(f);
        if (!row.error.empty()) j["error"] = row.error;
        rows.push_back(std::move(j));
    }
    nlohmann::json doc{{"version", version}, {"config", config.resolved()}, {"axes", result.axis_names},
                       {"rows", rows}};
    auto out = open_output(out_dir / (settings.prefix + "_sweep.json"));
    out << doc.dump(2) << '\n';
    return result;
}

}  // namespace hartree::tools
