#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "hartree/log.hpp"
#include "hartree_tools/config.hpp"
#include "hartree_tools/runner.hpp"
#include "hartree_tools/verify.hpp"

namespace {

namespace tools = hartree::tools;

enum Exit : int { ok = 0, usage = 1, verification = 2, numerical = 3 };

std::filesystem::path output_dir(const tools::ExperimentConfig& cfg, const std::string& flag) {
    return flag.empty() ? tools::output_settings(cfg).dir : std::filesystem::path(flag);
}

int classify_table(const tools::ExperimentConfig& cfg) {
    std::cout << "point\tp_star\tp_upper\tq_sc\tp+q\tlabel\n";
    for (const auto& point : tools::sweep_points(cfg)) {
        tools::ExperimentConfig c = cfg;
        std::string key;
        for (std::size_t i = 0; i < point.size(); ++i) {
            c = c.with_value(cfg.axes()[i].section, cfg.axes()[i].key, point[i]);
            key += (i ? ";" : "") + cfg.axes()[i].name() + "=" + tools::format_number(point[i]);
        }
        const auto r = tools::classify(c);
        const auto spec = tools::build_problem(c);
        std::cout << (key.empty() ? "-" : key) << '\t' << tools::format_number(r.p_star) << '\t'
                  << tools::format_number(r.p_upper) << '\t' << tools::format_number(r.q_sc) << '\t'
                  << tools::format_number(spec.p + spec.q) << '\t' << hartree::to_string(r.label) << '\n';
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral laboratory for fractional parabolic Hartree equations"};
    app.set_version_flag("--version", std::string(tools::version));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 20240601;
    std::string suite = "all";

    auto* simulate = app.add_subcommand("simulate", "Run one simulation and write its result document");
    simulate->add_option("--config", config_path, "Experiment configuration")->required();
    simulate->add_option("--out", out_flag, "Output directory (overrides [output] dir)");

    auto* sweep = app.add_subcommand("sweep", "Run the Cartesian parameter sweep of the [sweep] section");
    sweep->add_option("--config", config_path, "Experiment configuration")->required();
    sweep->add_option("--out", out_flag, "Output directory (overrides [output] dir)");
    sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    auto* classify = app.add_subcommand("classify", "Print the predicted regime for every sweep point");
    classify->add_option("--config", config_path, "Experiment configuration")->required();

    auto* verify = app.add_subcommand("verify", "Run the invariant suites and report measured deviations");
    verify->add_option("--suite", suite, "spectral, semigroup, operators, capacity, solver or all");
    verify->add_option("--seed", seed, "Seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : usage;
    }

    hartree::set_warning_handler([](std::string_view m) { std::cerr << "warning: " << m << '\n'; });

    try {
        if (*verify) {
            const auto results = tools::run_verification(suite, seed);
            tools::print_report(results, std::cout);
            for (const auto& r : results)
                if (!r.passed) return verification;
            return ok;
        }
        const auto cfg = tools::ExperimentConfig::load(config_path);
        if (*classify) return classify_table(cfg);
        if (*simulate) {
            const auto doc = tools::simulate(cfg, output_dir(cfg, out_flag));
            std::cout << doc.dump(2) << '\n';
            return ok;
        }
        const auto result = tools::sweep(cfg, output_dir(cfg, out_flag), workers);
        std::size_t failed = 0;
        for (const auto& row : result.rows) failed += row.error.empty() ? 0 : 1;
        std::cout << result.rows.size() << " points, " << failed << " failed\n";
        return ok;
    } catch (const tools::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage;
    } catch (const hartree::DomainError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical;
    }
}
