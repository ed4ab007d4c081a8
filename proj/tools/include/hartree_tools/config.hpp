#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hartree/capacity.hpp"
#include "hartree/solver.hpp"
#include "json.hpp"

namespace hartree::tools {

/// Malformed or inconsistent configuration; the message names the line when known.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Entry {
    std::string value;
    int line = 0;
};

/// One sweep dimension, declared as `section.key = v1, v2, ...`, `lin(a, b, n)` or `geom(a, b, n)`.
struct SweepAxis {
    std::string section;
    std::string key;
    std::vector<double> values;
    int line = 0;

    [[nodiscard]] std::string name() const { return section + "." + key; }
};

/**
 * Line-oriented `key = value` document with [grid], [equation], [initial],
 * [time], [sweep] and [output] sections. `#` and `;` start comments.
 */
class ExperimentConfig {
public:
    static ExperimentConfig parse(std::string_view text, std::string source = "<string>");
    static ExperimentConfig load(const std::filesystem::path& path);

    [[nodiscard]] std::optional<Entry> find(const std::string& section, const std::string& key) const;
    [[nodiscard]] const std::vector<SweepAxis>& axes() const noexcept { return axes_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

    /// Copy with one numeric value replaced (used for sweep points).
    [[nodiscard]] ExperimentConfig with_value(const std::string& section, const std::string& key, double value) const;

    /// Every applicable key with its explicit or default value.
    [[nodiscard]] nlohmann::json resolved() const;

private:
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::vector<SweepAxis> axes_;
    std::string source_;
};

/// Resolves the problem; throws ConfigError for missing, malformed or out-of-domain values.
ProblemSpec build_problem(const ExperimentConfig& config);

/// Tail exponent of algebraic initial data, if the data is algebraic.
std::optional<double> tail_exponent(const ExperimentConfig& config);

/// classify_regime for the configured kernel, using its effective exponent.
RegimeClassification classify(const ExperimentConfig& config);

struct OutputSettings {
    std::filesystem::path dir;
    std::string prefix;
};
OutputSettings output_settings(const ExperimentConfig& config);

/// Formats a double with 17 significant digits.
std::string format_number(double value);

}  // namespace hartree::tools
