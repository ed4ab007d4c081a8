#include "hartree_tools/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "hartree/capacity.hpp"
#include "hartree/norms.hpp"
#include "hartree/operators.hpp"
#include "hartree/picard.hpp"
#include "hartree/quadrature.hpp"
#include "hartree/regression.hpp"
#include "hartree/semigroup.hpp"
#include "hartree/solver.hpp"
#include "hartree_tools/config.hpp"

namespace hartree::tools {
namespace {

using Suite = std::function<void(std::vector<CheckResult>&, std::mt19937_64&)>;

void record(std::vector<CheckResult>& out, const char* suite, std::string name, double measured, double tolerance) {
    out.push_back({suite, std::move(name), measured, tolerance, std::isfinite(measured) && measured <= tolerance});
}

double sup_deviation(const Field& a, const Field& b) { return sup_relative_deviation(a, b); }

Field random_field(const Grid& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Field f(grid);
    for (auto& v : f.values) v = normal(rng);
    return f;
}

void spectral_suite(std::vector<CheckResult>& out, std::mt19937_64& rng) {
    for (int n : {1, 2}) {
        const Grid grid(n, n == 1 ? 4096 : 128, 20.0);
        const Field f = random_field(grid, rng);
        const SpectralField F = forward_transform(f);
        const std::string dim = n == 1 ? "1d" : "2d";
        record(out, "spectral", "round_trip_" + dim, sup_deviation(inverse_transform(F), f), 1e-12);

        double physical = 0.0;
        double spectral = 0.0;
        for (double v : f.values) physical += v * v;
        for (const auto& c : F.coefficients) spectral += std::norm(c);
        physical *= grid.cell_volume();
        spectral /= grid.box_volume();
        record(out, "spectral", "parseval_" + dim, std::abs(spectral - physical) / physical, 1e-10);
        record(out, "spectral", "hermitian_" + dim, hermitian_deviation(F), 1e-14);
    }
    // exp(-t|xi|^2) composed with itself equals exp(-2t|xi|^2).
    const Grid grid(1, 256, 20.0);
    const Multiplier once = propagator_symbol(grid, {2.0, 0.3});
    const Multiplier twice = propagator_symbol(grid, {2.0, 0.6});
    const Multiplier product = compose(once, once);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        worst = std::max(worst, std::abs(product.effective(k) - twice.effective(k)));
    record(out, "spectral", "multiplier_composition", worst, 1e-15);
}

void semigroup_suite(std::vector<CheckResult>& out, std::mt19937_64&) {
    const Grid grid(1, 1024, 64.0);
    for (double beta : {0.5, 1.0, 1.5, 2.0}) {
        const Field k = heat_kernel_values({beta, 1.0}, grid);
        record(out, "semigroup", "mass_beta_" + format_number(beta), std::abs(integral(k) - 1.0), 1e-8);
        record(out, "semigroup", "positivity_beta_" + format_number(beta),
               std::max(0.0, -min_value(k)) / sup_norm(k), 1e-8);
    }
    const Field k = heat_kernel_values({2.0, 1.0}, grid);
    const Field exact = sample(grid, [](std::span<const double> x) {
        return std::exp(-x[0] * x[0] / 4.0) / std::sqrt(4.0 * std::numbers::pi);
    });
    record(out, "semigroup", "gaussian_closed_form", sup_deviation(k, exact) * sup_norm(exact), 1e-8);
    record(out, "semigroup", "self_similarity_beta_2", self_similarity_check(2.0, 4.0, 2.0, grid), 1e-4);
    record(out, "semigroup", "self_similarity_beta_1.5",
           self_similarity_check(1.5, 2.0, 2.0, Grid(1, 2048, 256.0)), 1e-4);

    const Grid wide(1, 4096, 1024.0);
    const Field v = sample(wide, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    const auto times = geometric_grid(10.0, 1000.0, 9);
    const DecayFit fit = verify_lp_lq(2.0, 1.0, infinity, v, times);
    record(out, "semigroup", "l1_linf_decay_slope", std::abs(fit.slope / fit.expected_slope - 1.0), 0.05);
}

void operators_suite(std::vector<CheckResult>& out, std::mt19937_64&) {
    // Fourth derivative of a Gaussian: vanishing low moments make the periodic and
    // free-space potentials agree up to lattice effects.
    const Grid grid(1, 2048, 64.0);
    const Field f = sample(grid, [](std::span<const double> x) {
        const double y = x[0];
        return (16.0 * std::pow(y, 4) - 48.0 * y * y + 12.0) * std::exp(-y * y);
    });
    record(out, "operators", "riesz_backend_agreement",
           sup_deviation(riesz_potential(f, 0.5, RieszBackend::spectral),
                         riesz_potential(f, 0.5, RieszBackend::free_space_kernel)),
           1e-4);

    // I_{1/2} e^{-x^2} at 0 against adaptive quadrature of the defining integral.
    const double A = riesz_constant(1, 0.5).value;
    // y = u^2 removes the endpoint singularity: int_R |y|^(-1/2) e^(-y^2) dy = 4 int_0^inf e^(-u^4) du.
    const double oracle = 4.0 * A * integrate([](double u) { return std::exp(-std::pow(u, 4)); }, 0.0, 8.0);
    const Grid g(1, 4096, 32.0);
    const Field gauss = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    const double value = riesz_potential(gauss, 0.5, RieszBackend::free_space_kernel)[g.origin_index()];
    record(out, "operators", "riesz_gaussian_value", std::abs(value - oracle), 1e-4);

    std::vector<double> ratios;
    for (double lambda : {0.5, 1.0, 2.0}) {
        const Field d = sample(g, [lambda](std::span<const double> x) {
            return std::exp(-lambda * lambda * x[0] * x[0]);
        });
        ratios.push_back(hls_ratio(d, 0.5, 1.5, 6.0));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    record(out, "operators", "hls_dilation_invariance", (*hi - *lo) / *lo, 0.02);

    // Spectral and singular-integral fractional Laplacians agree on sin.
    const double pv = fractional_laplacian_quadrature([](double y) { return std::sin(y); }, 0.5, 0.7, 1e3);
    record(out, "operators", "pv_quadrature_sine", std::abs(pv - std::sin(0.7)) / std::sin(0.7), 1e-5);
}

void capacity_suite(std::vector<CheckResult>& out, std::mt19937_64& rng) {
    const CutoffSpec cut = CutoffSpec::for_exponents(2.0, 1.0);
    for (double s : {0.25, 0.5, 0.75})
        record(out, "capacity", "scaling_identity_s_" + format_number(s), frac_lap_scaling_check(cut, s, 4.0, 21),
               1e-6);

    // J1 ~ R^(n theta - beta) at fixed T and J2 ~ T^(theta - 1) at fixed R, over three decades.
    const int n = 1;
    const double beta = 2.0;
    const double p = 2.0;
    const double q = 1.0;
    const double theta = (p + q - 2.0) / (p + q);
    const auto grid = geometric_grid(1.0, 1000.0, 7);
    std::vector<double> j1;
    std::vector<double> j2;
    for (double x : grid) {
        j1.push_back(compute_J1(n, beta, p, q, x, 1.0, cut));
        j2.push_back(compute_J2(n, beta, p, q, 1.0, x, cut));
    }
    const double e1 = n * theta - beta;
    const double e2 = theta - 1.0;
    record(out, "capacity", "J1_radius_slope", std::abs(fit_loglog(grid, j1).slope / e1 - 1.0), 0.05);
    record(out, "capacity", "J2_time_slope", std::abs(fit_loglog(grid, j2).slope / e2 - 1.0), 0.05);

    // Riesz-kernel classifiers against the closed-form sign conditions.
    std::uniform_real_distribution<double> alpha_dist(0.05, 0.95);
    std::uniform_real_distribution<double> beta_dist(0.2, 2.0);
    std::uniform_real_distribution<double> sum_dist(2.05, 8.0);
    std::uniform_real_distribution<double> gamma_dist(0.1, 3.0);
    const auto radii = geometric_grid(10.0, 1e6, 41);
    int disagreements = 0;
    int compared = 0;
    while (compared < 100) {
        const double alpha = alpha_dist(rng);
        const double b = beta_dist(rng);
        const double sum = sum_dist(rng);
        const double gamma = gamma_dist(rng);
        const double mass_exponent = -n * (sum - 1.0) + alpha + b;
        const double tail_exponent = gamma * (sum - 1.0) - alpha - b;
        if (std::abs(mass_exponent) <= criterion_slope_threshold ||
            std::abs(tail_exponent) <= criterion_slope_threshold)
            continue;
        ++compared;
        const KernelSpec kernel = KernelSpec::riesz(alpha);
        const auto up = criterion_limsup(kernel, n, b, sum - 1.0, 1.0, radii);
        const auto down = criterion_liminf(kernel, n, b, sum - 1.0, 1.0, gamma, radii);
        const bool up_ok = up.verdict == (mass_exponent > 0 ? LimsupVerdict::diverges : LimsupVerdict::bounded);
        const bool down_ok =
            down.verdict == (tail_exponent < 0 ? LiminfVerdict::vanishes : LiminfVerdict::bounded_away);
        if (!up_ok || !down_ok) ++disagreements;
    }
    record(out, "capacity", "riesz_classifier_disagreements", disagreements, 0.0);
}

void solver_suite(std::vector<CheckResult>& out, std::mt19937_64&) {
    {
        ProblemSpec spec(Grid(1, 256, 40.0));
        spec.initial = GaussianData{0.0, 1.0};
        spec.horizon = 0.5;
        const RunOutcome run = integrate(spec);
        record(out, "solver", "zero_data_stays_zero",
               run.status == RunStatus::completed ? run.series.back().linf : infinity, 0.0);
    }
    {
        ProblemSpec spec(Grid(1, 512, 40.0));
        spec.kernel = KernelSpec::riesz(0.5);
        spec.p = 2.0;
        spec.q = 1.0;
        spec.initial = GaussianData{1.0, 1.0};
        spec.horizon = 0.5;
        spec.record_every_step = true;
        const RunOutcome run = integrate(spec);
        double worst_min = 0.0;
        double worst_mass = 0.0;
        for (std::size_t i = 0; i < run.series.size(); ++i) {
            const auto& s = run.series[i];
            worst_min = std::max(worst_min, -s.min / s.linf);
            if (i > 0) {
                const double prev = run.series[i - 1].mass;
                worst_mass = std::max(worst_mass, (prev - s.mass) / prev);
            }
        }
        record(out, "solver", "positivity", worst_min, 1e-9);
        record(out, "solver", "mass_nondecreasing", worst_mass, 1e-9);
    }
    {
        ProblemSpec spec(Grid(1, 256, 20.0));
        spec.kernel = KernelSpec::riesz(0.5);
        spec.p = 3.0;
        spec.q = 1.0;
        spec.lebesgue_index = 3.0;
        spec.initial = GaussianData{0.5, 1.0};
        const double t_local = 0.05;
        const PicardResult picard = picard_local_solve(spec, t_local, 30, 100);
        spec.horizon = t_local;
        spec.snapshot_times = picard.times;
        const RunOutcome run = integrate(spec);
        double gap = 0.0;
        for (std::size_t j = 0; j < picard.times.size() && j < run.snapshots.size(); ++j)
            gap = std::max(gap, sup_deviation(picard.trajectory[j], run.snapshots[j].field));
        if (run.snapshots.size() != picard.times.size()) gap = infinity;
        record(out, "solver", "picard_etd_agreement", gap, 1e-4);
        double worst_ratio = 0.0;
        for (std::size_t m = 2; m < picard.ratios.size(); ++m) worst_ratio = std::max(worst_ratio, picard.ratios[m]);
        record(out, "solver", "picard_contraction", worst_ratio, 0.5);
    }
    {
        ProblemSpec spec(Grid(1, 512, 40.0));
        spec.kernel = KernelSpec::riesz(0.5);
        spec.initial = GaussianData{1.0, 1.0};
        const ScalingCheck check = scaling_check(spec, 2.0, 0.2);
        record(out, "solver", "scaling_invariance", check.field_deviation, 1e-3);
        record(out, "solver", "critical_norm_invariance", check.norm_deviation, 1e-10);
    }
}

const std::vector<std::pair<std::string, Suite>>& suites() {
    static const std::vector<std::pair<std::string, Suite>> table = {
        {"spectral", spectral_suite}, {"semigroup", semigroup_suite}, {"operators", operators_suite},
        {"capacity", capacity_suite}, {"solver", solver_suite},
    };
    return table;
}

}  // namespace

std::vector<CheckResult> run_verification(const std::string& selector, std::uint64_t seed) {
    std::vector<CheckResult> results;
    bool matched = false;
    for (const auto& [name, suite] : suites()) {
        if (selector != "all" && selector != name) continue;
        matched = true;
        std::mt19937_64 rng(seed);
        suite(results, rng);
    }
    if (!matched)
        throw std::invalid_argument("unknown suite '" + selector +
                                    "' (expected spectral, semigroup, operators, capacity, solver or all)");
    return results;
}

void print_report(const std::vector<CheckResult>& results, std::ostream& out) {
    std::size_t failed = 0;
    out << "suite\tcheck\tmeasured\ttolerance\tresult\n";
    for (const auto& r : results) {
        out << r.suite << '\t' << r.name << '\t' << format_number(r.measured) << '\t' << format_number(r.tolerance)
            << '\t' << (r.passed ? "PASS" : "FAIL") << '\n';
        if (!r.passed) ++failed;
    }
    out << "summary\t" << results.size() - failed << " passed\t" << failed << " failed\n";
}

}  // namespace hartree::tools
