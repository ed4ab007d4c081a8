#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hartree/norms.hpp"
#include "hartree_tools/config.hpp"
#include "hartree_tools/runner.hpp"
#include "hartree_tools/verify.hpp"

using namespace hartree;
using namespace hartree::tools;
namespace fs = std::filesystem;

namespace {

const char* base_config = R"(# small run
[grid]
dim = 1
points = 256
box = 40

[equation]
beta = 2
kernel = riesz
alpha = 0.5
p = 2
q = 1

[initial]
type = gaussian
amplitude = 0.5

[time]
horizon = 0.1
output_interval = 0.02
)";

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("hartree_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string error_of(const std::string& text) {
    try {
        (void)build_problem(ExperimentConfig::parse(text, "cfg"));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("parsing maps every section onto the problem") {
    const auto cfg = ExperimentConfig::parse(base_config, "cfg");
    const ProblemSpec spec = build_problem(cfg);
    CHECK(spec.grid.points_per_axis() == 256);
    CHECK(spec.grid.box_length() == 40.0);
    CHECK(spec.beta == 2.0);
    CHECK(spec.kernel.is_riesz());
    CHECK(spec.p == 2.0);
    CHECK(spec.horizon == 0.1);
    CHECK(spec.output_interval == 0.02);
    CHECK(spec.dt_min == 1e-14);
    CHECK(spec.dealias);
    CHECK(std::get<GaussianData>(spec.initial).amplitude == 0.5);
    CHECK(cfg.find("grid", "box")->line == 5);
}

TEST_CASE("unknown keys are rejected with their line") {
    const std::string text = std::string(base_config) + "bta = 2\n";
    const std::string e = error_of("[equation]\nbta = 2\n");
    CHECK(e.find("cfg:2") != std::string::npos);
    CHECK(e.find("bta") != std::string::npos);
    CHECK(error_of(text).find("bta") != std::string::npos);
}

TEST_CASE("malformed documents") {
    CHECK(error_of("[grid\n").find("cfg:1") != std::string::npos);
    CHECK(error_of("[nowhere]\n").find("unknown section") != std::string::npos);
    CHECK(error_of("dim = 1\n").find("before any section") != std::string::npos);
    CHECK(error_of("[grid]\ndim 1\n").find("cfg:2") != std::string::npos);
    CHECK(error_of("[grid]\ndim = one\n").find("not a number") != std::string::npos);
    CHECK(error_of("[grid]\npoints = 64.5\n").find("integer") != std::string::npos);
    CHECK(error_of("[grid]\ndim = 1\ndim = 2\n").find("duplicate") != std::string::npos);
    CHECK(error_of("[time]\ndealias = maybe\n").find("true or false") != std::string::npos);
}

TEST_CASE("missing, inapplicable and out-of-domain values") {
    std::string text = base_config;
    CHECK(error_of(text.substr(0, text.find("horizon"))).find("missing required key 'horizon'") != std::string::npos);

    std::string with_sigma = base_config;
    with_sigma.replace(with_sigma.find("alpha = 0.5"), 11, "alpha = 0.5\nsigma = 0.3");
    CHECK(error_of(with_sigma).find("does not apply") != std::string::npos);

    std::string bad_beta = base_config;
    bad_beta.replace(bad_beta.find("beta = 2"), 8, "beta = 3");
    CHECK(error_of(bad_beta).find("beta") != std::string::npos);

    std::string bad_points = base_config;
    bad_points.replace(bad_points.find("points = 256"), 12, "points = 100");
    CHECK(error_of(bad_points).find("power of two") != std::string::npos);

    std::string bad_kernel = base_config;
    bad_kernel.replace(bad_kernel.find("kernel = riesz"), 14, "kernel = yukawa");
    CHECK(error_of(bad_kernel).find("unknown kernel") != std::string::npos);
}

TEST_CASE("sweep axis syntax") {
    const auto cfg = ExperimentConfig::parse(std::string(base_config) +
                                             "[sweep]\nequation.p = 1.5, 2, 2.5\n"
                                             "equation.alpha = lin(0.25, 0.75, 3)\n"
                                             "initial.amplitude = geom(0.01, 1, 3)\n");
    REQUIRE(cfg.axes().size() == 3);
    CHECK(cfg.axes()[0].values == std::vector<double>{1.5, 2.0, 2.5});
    CHECK(cfg.axes()[1].values[1] == doctest::Approx(0.5));
    CHECK(cfg.axes()[2].values[1] == doctest::Approx(0.1));
    CHECK(sweep_points(cfg).size() == 27);
    CHECK(cfg.axes()[1].name() == "equation.alpha");

    CHECK_THROWS_AS(ExperimentConfig::parse("[sweep]\nequation.kernel = 1, 2\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("[sweep]\nequation.bta = 1, 2\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("[sweep]\nequation.p = lin(1, 2)\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("[sweep]\nequation.p = geom(-1, 2, 3)\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("[sweep]\nequation.p = 1, x\n"), ConfigError);
}

TEST_CASE("resolved configuration lists defaults") {
    const auto cfg = ExperimentConfig::parse(base_config, "cfg");
    const auto j = cfg.resolved();
    CHECK(j["time"]["dt_min"] == 1e-14);
    CHECK(j["time"]["dt_max"] == "inf");
    CHECK(j["grid"]["points"] == 256);
    CHECK(j["output"]["prefix"] == "run");
    CHECK(j["equation"]["kernel"] == "riesz");
    CHECK_FALSE(j["equation"].contains("sigma"));
    const auto changed = cfg.with_value("equation", "p", 3.25);
    CHECK(build_problem(changed).p == 3.25);
}

TEST_CASE("critical-norm rescaling of the data") {
    std::string text = base_config;
    text.replace(text.find("amplitude = 0.5"), 15, "qsc_norm = 1e-3");
    const ProblemSpec spec = build_problem(ExperimentConfig::parse(text));
    const Field u0 = sample_initial_data(spec.initial, spec.grid);
    CHECK(lp_norm(u0, spec.critical_lebesgue_index()) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("classification of a configuration") {
    const auto r = classify(ExperimentConfig::parse(base_config));
    CHECK(r.p_star == doctest::Approx(3.5));
    CHECK(r.label == RegimeLabel::nonexistence_mass);
    std::string text = base_config;
    text.replace(text.find("type = gaussian\namplitude = 0.5"), 31, "type = algebraic\nepsilon = 0.1\ngamma = 0.4");
    CHECK(tail_exponent(ExperimentConfig::parse(text)) == 0.4);
}

TEST_CASE("simulate on zero data") {
    std::string text = base_config;
    text.replace(text.find("type = gaussian\namplitude = 0.5"), 31, "type = zero");
    const fs::path dir = scratch_dir("zero");
    const auto doc = simulate(ExperimentConfig::parse(text), dir);
    CHECK(doc["status"] == "completed");
    for (const char* k : {"linf", "ls", "qsc", "mass"}) CHECK(doc["final_norms"][k] == 0.0);
    CHECK_FALSE(doc.contains("blowup_time"));
    CHECK(doc["version"] == std::string(version));
    CHECK(doc["config"]["initial"]["type"] == "zero");
    CHECK(fs::exists(dir / "run.json"));
    const std::string series = slurp(dir / doc["series_file"].get<std::string>());
    CHECK(series.rfind("t,ls,linf,qsc,mass,min\n", 0) == 0);
}

TEST_CASE("simulate reports blow-up") {
    std::string text = base_config;
    text.replace(text.find("p = 2"), 5, "p = 1.5");
    text.replace(text.find("amplitude = 0.5"), 15, "amplitude = 5");
    text.replace(text.find("horizon = 0.1"), 13, "horizon = 10");
    const auto doc = simulate(ExperimentConfig::parse(text), scratch_dir("blowup"));
    CHECK(doc["status"] == "blowup");
    CHECK(doc["blowup_time"].get<double>() < 10.0);
}

TEST_CASE("empty sweep equals a single simulation") {
    const auto cfg = ExperimentConfig::parse(base_config);
    const auto doc = simulate(cfg, scratch_dir("single"));
    const auto result = sweep(cfg, scratch_dir("single_sweep"), 2);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].point.empty());
    CHECK(result.rows[0].status == doc["status"]);
    CHECK(result.rows[0].final_norms.linf == doc["final_norms"]["linf"].get<double>());
    CHECK(result.rows[0].final_norms.mass == doc["final_norms"]["mass"].get<double>());
}

TEST_CASE("sweep rows do not depend on the worker count") {
    const auto cfg = ExperimentConfig::parse(std::string(base_config) + "[sweep]\nequation.alpha = 0.75, 0.25, 0.5\n"
                                                                        "equation.q = 1, 2\n");
    const fs::path a = scratch_dir("sweep1");
    const fs::path b = scratch_dir("sweep4");
    const auto one = sweep(cfg, a, 1);
    const auto four = sweep(cfg, b, 4);
    REQUIRE(one.rows.size() == 6);
    CHECK(slurp(a / "run_sweep.csv") == slurp(b / "run_sweep.csv"));
    // Rows are sorted by point and carry the predicted p_star = 1 + (2 + alpha).
    CHECK(one.rows[0].point == std::vector<double>{0.25, 1.0});
    for (const auto& row : one.rows) CHECK(row.p_star == doctest::Approx(3.0 + row.point[0]));
    CHECK(fs::exists(a / "run_sweep.json"));
}

TEST_CASE("per-point failures stay in their row") {
    // alpha = 1.5 is outside (0, n) in one dimension.
    const auto cfg = ExperimentConfig::parse(std::string(base_config) + "[sweep]\nequation.alpha = 0.5, 1.5\n");
    const auto result = sweep(cfg, scratch_dir("failure"), 2);
    REQUIRE(result.rows.size() == 2);
    CHECK(result.rows[0].status == "completed");
    CHECK(result.rows[1].status == "error");
    CHECK_FALSE(result.rows[1].error.empty());
}

TEST_CASE("verification selector") {
    CHECK_THROWS_AS(run_verification("nonsense", 1), std::invalid_argument);
    const auto results = run_verification("spectral", 1);
    CHECK_FALSE(results.empty());
    for (const auto& r : results) CHECK(r.passed);
    std::ostringstream os;
    print_report(results, os);
    CHECK(os.str().find("summary\t") != std::string::npos);
}
