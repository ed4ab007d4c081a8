#include "hartree_tools/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hartree/regression.hpp"

namespace hartree::tools {
namespace {

enum class Kind { number, integer, word, flag };

struct KeySpec {
    const char* section;
    const char* key;
    Kind kind;
    const char* fallback;  // nullptr: required or kernel/data specific
};

// Keys accepted in each section. Kernel- and data-specific keys are checked in build_problem.
constexpr KeySpec schema[] = {
    {"grid", "dim", Kind::integer, nullptr},
    {"grid", "points", Kind::integer, nullptr},
    {"grid", "box", Kind::number, nullptr},
    {"equation", "beta", Kind::number, nullptr},
    {"equation", "kernel", Kind::word, nullptr},
    {"equation", "alpha", Kind::number, nullptr},
    {"equation", "sigma", Kind::number, nullptr},
    {"equation", "coefficient", Kind::number, nullptr},
    {"equation", "delta", Kind::number, nullptr},
    {"equation", "value", Kind::number, nullptr},
    {"equation", "tail_threshold", Kind::number, "2"},
    {"equation", "p", Kind::number, nullptr},
    {"equation", "q", Kind::number, nullptr},
    {"initial", "type", Kind::word, nullptr},
    {"initial", "amplitude", Kind::number, nullptr},
    {"initial", "width", Kind::number, nullptr},
    {"initial", "center_x", Kind::number, nullptr},
    {"initial", "center_y", Kind::number, nullptr},
    {"initial", "epsilon", Kind::number, nullptr},
    {"initial", "gamma", Kind::number, nullptr},
    {"initial", "qsc_norm", Kind::number, nullptr},
    {"time", "horizon", Kind::number, nullptr},
    {"time", "dt_initial", Kind::number, "1e-3"},
    {"time", "dt_min", Kind::number, "1e-14"},
    {"time", "dt_max", Kind::number, "inf"},
    {"time", "output_interval", Kind::number, nullptr},
    {"time", "blowup_factor", Kind::number, "1e8"},
    {"time", "lebesgue_index", Kind::number, "2"},
    {"time", "reject_above", Kind::number, "0.1"},
    {"time", "grow_below", Kind::number, "0.01"},
    {"time", "growth", Kind::number, "1.25"},
    {"time", "shrink", Kind::number, "0.5"},
    {"time", "dealias", Kind::flag, "true"},
    {"output", "dir", Kind::word, "results"},
    {"output", "prefix", Kind::word, "run"},
};

const std::set<std::string> sections = {"grid", "equation", "initial", "time", "sweep", "output"};

const KeySpec* lookup(const std::string& section, const std::string& key) {
    for (const auto& k : schema)
        if (section == k.section && key == k.key) return &k;
    return nullptr;
}

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::string at_line(const std::string& source, int line) { return source + ":" + std::to_string(line) + ": "; }

std::optional<double> to_number(const std::string& text) {
    if (text == "inf" || text == "+inf") return infinity;
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

std::vector<double> parse_axis(const std::string& text, const std::string& where) {
    auto fail = [&](const std::string& why) { throw ConfigError(where + why); };
    auto numbers = [&](const std::string& list) {
        std::vector<double> out;
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto v = to_number(trim(item));
            if (!v) fail("sweep value '" + trim(item) + "' is not a number");
            out.push_back(*v);
        }
        return out;
    };
    for (const char* fn : {"lin", "geom"}) {
        const std::string prefix = std::string(fn) + "(";
        if (text.rfind(prefix, 0) == 0) {
            if (text.back() != ')') fail("unterminated " + std::string(fn) + "(...)");
            const auto args = numbers(text.substr(prefix.size(), text.size() - prefix.size() - 1));
            if (args.size() != 3 || args[2] < 1 || args[2] != std::floor(args[2]))
                fail(std::string(fn) + "(first, last, count) needs three arguments with an integer count");
            const auto count = static_cast<std::size_t>(args[2]);
            if (count == 1) return {args[0]};
            if (std::string(fn) == "geom") {
                try {
                    return geometric_grid(args[0], args[1], count);
                } catch (const DomainError& e) {
                    fail(e.what());
                }
            }
            std::vector<double> out(count);
            for (std::size_t i = 0; i < count; ++i)
                out[i] = args[0] + (args[1] - args[0]) * static_cast<double>(i) / static_cast<double>(count - 1);
            return out;
        }
    }
    auto out = numbers(text);
    if (out.empty()) fail("empty sweep axis");
    return out;
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text, std::string source) {
    ExperimentConfig cfg;
    cfg.source_ = std::move(source);
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto comment = raw.find_first_of("#;");
        const std::string content = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
        if (content.empty()) continue;
        const std::string where = at_line(cfg.source_, line);
        if (content.front() == '[') {
            if (content.back() != ']') throw ConfigError(where + "malformed section header '" + content + "'");
            section = trim(content.substr(1, content.size() - 2));
            if (!sections.contains(section)) throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + content + "'");
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (section.empty()) throw ConfigError(where + "key '" + key + "' appears before any section header");
        if (key.empty() || value.empty()) throw ConfigError(where + "empty key or value");

        if (section == "sweep") {
            const auto dot = key.find('.');
            const std::string s = dot == std::string::npos ? "" : key.substr(0, dot);
            const std::string k = dot == std::string::npos ? key : key.substr(dot + 1);
            const KeySpec* spec = lookup(s, k);
            if (spec == nullptr || (spec->kind != Kind::number && spec->kind != Kind::integer))
                throw ConfigError(where + "unknown sweep axis '" + key + "' (expected section.key of a numeric key)");
            for (const auto& axis : cfg.axes_)
                if (axis.name() == key) throw ConfigError(where + "duplicate sweep axis '" + key + "'");
            cfg.axes_.push_back({s, k, parse_axis(value, where), line});
            continue;
        }
        const KeySpec* spec = lookup(section, key);
        if (spec == nullptr) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
        if (cfg.sections_[section].contains(key)) throw ConfigError(where + "duplicate key '" + key + "'");
        if (spec->kind == Kind::number || spec->kind == Kind::integer) {
            const auto v = to_number(value);
            if (!v) throw ConfigError(where + "value of '" + key + "' is not a number: '" + value + "'");
            if (spec->kind == Kind::integer && *v != std::floor(*v))
                throw ConfigError(where + "value of '" + key + "' must be an integer");
        }
        if (spec->kind == Kind::flag && value != "true" && value != "false")
            throw ConfigError(where + "value of '" + key + "' must be true or false");
        cfg.sections_[section][key] = {value, line};
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open configuration");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::optional<Entry> ExperimentConfig::find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
}

ExperimentConfig ExperimentConfig::with_value(const std::string& section, const std::string& key, double value) const {
    ExperimentConfig copy = *this;
    const int line = find(section, key) ? find(section, key)->line : 0;
    copy.sections_[section][key] = {format_number(value), line};
    return copy;
}

namespace {

struct Reader {
    const ExperimentConfig& cfg;

    [[nodiscard]] std::string where(const std::string& s, const std::string& k) const {
        const auto e = cfg.find(s, k);
        return e && e->line > 0 ? at_line(cfg.source(), e->line) : cfg.source() + ": ";
    }
    [[nodiscard]] bool has(const std::string& s, const std::string& k) const { return cfg.find(s, k).has_value(); }

    [[nodiscard]] std::string text(const std::string& s, const std::string& k) const {
        if (const auto e = cfg.find(s, k)) return e->value;
        const KeySpec* spec = lookup(s, k);
        if (spec != nullptr && spec->fallback != nullptr) return spec->fallback;
        throw ConfigError(cfg.source() + ": missing required key '" + k + "' in [" + s + "]");
    }
    [[nodiscard]] double number(const std::string& s, const std::string& k) const {
        const auto v = to_number(text(s, k));
        if (!v) throw ConfigError(where(s, k) + "value of '" + k + "' is not a number");
        return *v;
    }
    [[nodiscard]] double number_or(const std::string& s, const std::string& k, double fallback) const {
        return has(s, k) ? number(s, k) : fallback;
    }
    void forbid(const std::string& s, const std::string& k, const std::string& why) const {
        if (has(s, k)) throw ConfigError(where(s, k) + "key '" + k + "' " + why);
    }
};

KernelSpec read_kernel(const Reader& r) {
    const std::string name = r.text("equation", "kernel");
    const std::vector<std::string> all = {"alpha", "sigma", "coefficient", "delta", "value"};
    std::vector<std::string> allowed;
    KernelSpec kernel = KernelSpec::constant(0.0);
    if (name == "riesz") {
        allowed = {"alpha"};
        kernel = KernelSpec::riesz(r.number("equation", "alpha"));
    } else if (name == "power") {
        allowed = {"sigma", "coefficient"};
        kernel = KernelSpec::power(r.number_or("equation", "coefficient", 1.0), r.number("equation", "sigma"));
    } else if (name == "power_log") {
        allowed = {"sigma", "delta"};
        kernel = KernelSpec::power_log(r.number("equation", "sigma"), r.number("equation", "delta"));
    } else if (name == "constant") {
        allowed = {"value"};
        kernel = KernelSpec::constant(r.number("equation", "value"));
    } else {
        throw ConfigError(r.where("equation", "kernel") + "unknown kernel '" + name +
                          "' (expected riesz, power, power_log or constant)");
    }
    for (const auto& k : all)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            r.forbid("equation", k, "does not apply to kernel '" + name + "'");
    kernel.tail_threshold = r.number("equation", "tail_threshold");
    return kernel;
}

InitialData read_initial(const Reader& r) {
    const std::string type = r.text("initial", "type");
    std::vector<std::string> allowed;
    InitialData data;
    if (type == "gaussian") {
        allowed = {"amplitude", "width", "center_x", "center_y", "qsc_norm"};
        data = GaussianData{r.number_or("initial", "amplitude", 1.0), r.number_or("initial", "width", 1.0),
                            {r.number_or("initial", "center_x", 0.0), r.number_or("initial", "center_y", 0.0)}};
    } else if (type == "algebraic") {
        allowed = {"epsilon", "gamma", "qsc_norm"};
        data = AlgebraicData{r.number("initial", "epsilon"), r.number("initial", "gamma")};
    } else if (type == "zero") {
        data = GaussianData{0.0, 1.0};
    } else {
        throw ConfigError(r.where("initial", "type") + "unknown initial data type '" + type +
                          "' (expected gaussian, algebraic or zero)");
    }
    for (const char* k : {"amplitude", "width", "center_x", "center_y", "epsilon", "gamma", "qsc_norm"})
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            r.forbid("initial", k, "does not apply to initial data '" + type + "'");
    return data;
}

}  // namespace

ProblemSpec build_problem(const ExperimentConfig& config) {
    const Reader r{config};
    std::optional<Grid> grid;
    try {
        grid.emplace(static_cast<int>(r.number("grid", "dim")), static_cast<std::size_t>(r.number("grid", "points")),
                     r.number("grid", "box"));
    } catch (const DomainError& e) {
        throw ConfigError(config.source() + ": [grid] " + e.what());
    }
    ProblemSpec spec(*grid);
    spec.beta = r.number("equation", "beta");
    spec.p = r.number("equation", "p");
    spec.q = r.number("equation", "q");
    spec.kernel = read_kernel(r);
    spec.initial = read_initial(r);
    spec.horizon = r.number("time", "horizon");
    spec.dt_initial = r.number("time", "dt_initial");
    spec.dt_min = r.number("time", "dt_min");
    spec.dt_max = r.number("time", "dt_max");
    spec.output_interval = r.number_or("time", "output_interval", spec.horizon / 100.0);
    spec.blowup_factor = r.number("time", "blowup_factor");
    spec.lebesgue_index = r.number("time", "lebesgue_index");
    spec.control = {r.number("time", "reject_above"), r.number("time", "grow_below"), r.number("time", "growth"),
                    r.number("time", "shrink")};
    spec.dealias = r.text("time", "dealias") == "true";
    try {
        spec.validate();
        if (r.has("initial", "qsc_norm")) {
            const double target = r.number("initial", "qsc_norm");
            if (!(target >= 0.0)) throw DomainError("qsc_norm must be >= 0");
            const Field u0 = sample_initial_data(spec.initial, spec.grid);
            const double current = lp_norm(u0, spec.critical_lebesgue_index());
            if (current == 0.0) throw DomainError("qsc_norm: initial data vanishes and cannot be rescaled");
            std::vector<double> values = u0.values;
            for (double& v : values) v *= target / current;
            spec.initial = CustomData{values};
        }
    } catch (const DomainError& e) {
        throw ConfigError(config.source() + ": " + e.what());
    }
    return spec;
}

std::optional<double> tail_exponent(const ExperimentConfig& config) {
    const Reader r{config};
    if (r.text("initial", "type") != "algebraic") return std::nullopt;
    return r.number("initial", "gamma");
}

RegimeClassification classify(const ExperimentConfig& config) {
    const ProblemSpec spec = build_problem(config);
    const int n = spec.grid.dim();
    try {
        return classify_regime(n, spec.kernel.effective_alpha(n), spec.beta, spec.p, spec.q, tail_exponent(config));
    } catch (const DomainError& e) {
        throw ConfigError(config.source() + ": classification: " + e.what());
    }
}

OutputSettings output_settings(const ExperimentConfig& config) {
    const Reader r{config};
    return {r.text("output", "dir"), r.text("output", "prefix")};
}

nlohmann::json ExperimentConfig::resolved() const {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& k : schema) {
        std::string value;
        if (const auto e = find(k.section, k.key)) value = e->value;
        else if (k.fallback != nullptr) value = k.fallback;
        else continue;
        auto& slot = out[k.section][k.key];
        if (k.kind == Kind::number || k.kind == Kind::integer) {
            const double v = *to_number(value);
            if (!std::isfinite(v)) slot = value;
            else if (k.kind == Kind::integer) slot = static_cast<long long>(v);
            else slot = v;
        } else if (k.kind == Kind::flag) {
            slot = value == "true";
        } else {
            slot = value;
        }
    }
    if (!out["time"].contains("output_interval") && out["time"].contains("horizon"))
        out["time"]["output_interval"] = out["time"]["horizon"].get<double>() / 100.0;
    for (const auto& axis : axes_) out["sweep"][axis.name()] = axis.values;
    out["source"] = source_;
    return out;
}

}  // namespace hartree::tools
