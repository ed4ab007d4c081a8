#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hartree_tools/config.hpp"
#include "json.hpp"

namespace hartree::tools {

inline constexpr const char* version = HARTREE_VERSION;

/// Runs one simulation, writes <prefix>.json and <prefix>_series.csv into out_dir,
/// and returns the result document.
nlohmann::json simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct SweepRow {
    std::vector<double> point;
    std::string label;
    double p_star = 0.0;
    double p_upper = 0.0;
    double q_sc = 0.0;
    std::string status;
    std::optional<double> blowup_time;
    NormSample final_norms{};
    std::string error;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<SweepRow> rows;
};

/// Cartesian sweep over the [sweep] axes on a pool of `workers` threads. Rows are
/// sorted by parameter point; failures are recorded in the row. Writes
/// <prefix>_sweep.csv and <prefix>_sweep.json into out_dir.
SweepResult sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::size_t workers);

/// Sweep points without running anything; used by `classify`.
std::vector<std::vector<double>> sweep_points(const ExperimentConfig& config);

}  // namespace hartree::tools
