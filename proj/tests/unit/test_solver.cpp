#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hartree/norms.hpp"
#include "hartree/picard.hpp"
#include "hartree/semigroup.hpp"
#include "hartree/solver.hpp"
#include "oracles.hpp"

using namespace hartree;

namespace {

// With a constant kernel c and spatially constant data the problem reduces to
// u' = c L u^m, m = p + q, on a box of length L.
double ode_solution(double u0, double c, double L, double m, double t) {
    return std::pow(std::pow(u0, 1.0 - m) - (m - 1.0) * c * L * t, 1.0 / (1.0 - m));
}

ProblemSpec ode_problem(double u0) {
    ProblemSpec spec(Grid(1, 64, 10.0));
    spec.kernel = KernelSpec::constant(1.0);
    spec.p = 2.0;
    spec.q = 1.0;
    spec.initial = CustomData{std::vector<double>(64, u0)};
    return spec;
}

ProblemSpec small_riesz_problem() {
    ProblemSpec spec(Grid(1, 512, 40.0));
    spec.kernel = KernelSpec::riesz(0.5);
    spec.p = 2.0;
    spec.q = 1.0;
    spec.initial = GaussianData{1.0, 1.0};
    spec.horizon = 0.5;
    spec.output_interval = 0.05;
    return spec;
}

}  // namespace

TEST_CASE("phi functions") {
    for (double z : {-50.0, -3.0, -0.5, -1e-3, -1e-9, 0.0, 1e-6, 0.7}) {
        CAPTURE(z);
        if (std::abs(z) > 1e-2) {
            CHECK(phi1(z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-14));
            CHECK(phi2(z) == doctest::Approx((std::expm1(z) - z) / (z * z)).epsilon(1e-12));
        } else {
            CHECK(phi1(z) == doctest::Approx(1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0).epsilon(1e-14));
            CHECK(phi2(z) == doctest::Approx(0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 + z * z * z * z / 720.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("initial data sampling") {
    const Grid g(1, 256, 20.0);
    const Field a = sample_initial_data(GaussianData{2.0, 0.5, {1.0, 0.0}}, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coordinate(i) - 1.0;
        CHECK(a[i] == doctest::Approx(2.0 * std::exp(-x * x / 0.25)));
    }
    const Field b = sample_initial_data(AlgebraicData{0.1, 1.5}, g);
    CHECK(b[g.origin_index()] == doctest::Approx(0.1));
    CHECK(b[0] == doctest::Approx(0.1 * std::pow(1.0 + 100.0, -0.75)));
    CHECK_THROWS_AS(sample_initial_data(CustomData{{1.0, 2.0}}, g), DomainError);
    CHECK_THROWS_AS(sample_initial_data(GaussianData{1.0, 0.0}, g), DomainError);
}

TEST_CASE("problem validation") {
    ProblemSpec spec(Grid(1, 64, 10.0));
    CHECK_NOTHROW(spec.validate());
    auto broken = [&](auto mutate) {
        ProblemSpec s = spec;
        mutate(s);
        return s;
    };
    CHECK_THROWS_AS(broken([](ProblemSpec& s) { s.beta = 2.5; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ProblemSpec& s) { s.p = 0.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ProblemSpec& s) { s.q = -1.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ProblemSpec& s) { s.horizon = 0.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ProblemSpec& s) { s.dt_min = 1.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ProblemSpec& s) { s.blowup_factor = 1.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ProblemSpec& s) { s.kernel = KernelSpec::riesz(1.5); }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](ProblemSpec& s) { s.snapshot_times = {2.0}; }).validate(), DomainError);
    CHECK_THROWS_AS(integrate(broken([](ProblemSpec& s) { s.beta = -1.0; })), DomainError);
}

TEST_CASE("critical index and digest") {
    ProblemSpec spec(Grid(1, 64, 10.0));
    spec.beta = 2.0;
    spec.kernel = KernelSpec::riesz(0.5);
    spec.p = 5.5;
    spec.q = 1.0;
    CHECK(spec.critical_lebesgue_index() == doctest::Approx(2.2));
    const std::string d = spec.digest();
    CHECK(d.size() == 16);
    CHECK(d == spec.digest());
    ProblemSpec other = spec;
    other.p = 5.50000001;
    CHECK(other.digest() != d);
}

TEST_CASE("linear problem reproduces the semigroup") {
    ProblemSpec spec(Grid(1, 256, 30.0));
    spec.kernel = KernelSpec::constant(0.0);
    spec.beta = 1.3;
    spec.initial = GaussianData{1.0, 1.5};
    spec.horizon = 0.7;
    spec.snapshot_times = {0.7};
    const RunOutcome run = integrate(spec);
    REQUIRE(run.status == RunStatus::completed);
    const Field exact = propagate(sample_initial_data(spec.initial, spec.grid), {1.3, 0.7});
    CHECK(oracle::max_abs_diff(run.snapshots.back().field, exact) <= 1e-12);
}

TEST_CASE("spatially constant data follows the reduced ODE") {
    ProblemSpec spec = ode_problem(0.1);
    spec.horizon = 2.0;
    spec.dt_max = 0.01;
    spec.output_interval = 0.5;
    const RunOutcome run = integrate(spec);
    REQUIRE(run.status == RunStatus::completed);
    for (const auto& s : run.series)
        CHECK(s.linf == doctest::Approx(ode_solution(0.1, 1.0, 10.0, 3.0, s.t)).epsilon(1e-6));
}

TEST_CASE("blow-up time of the reduced ODE") {
    // u^-2 = 100 - 20 t vanishes at t = 5.
    ProblemSpec spec = ode_problem(0.1);
    spec.horizon = 10.0;
    spec.blowup_factor = 1e4;
    const RunOutcome run = integrate(spec);
    REQUIRE(run.status == RunStatus::blowup);
    CHECK(*run.blowup_time == doctest::Approx(5.0).epsilon(1e-2));
    CHECK(run.series.back().linf >= 1e4 * 0.1);

    // Tighter step control converges on the exact time.
    spec.control.reject_above = 1e-3;
    spec.control.grow_below = 1e-4;
    const RunOutcome fine = integrate(spec);
    REQUIRE(fine.status == RunStatus::blowup);
    CHECK(std::abs(*fine.blowup_time - 5.0) < 0.1 * std::abs(*run.blowup_time - 5.0));
    CHECK(*fine.blowup_time == doctest::Approx(5.0).epsilon(1e-4));
}

TEST_CASE("step size underflow is reported distinctly") {
    ProblemSpec spec = ode_problem(0.1);
    spec.horizon = 10.0;
    spec.blowup_factor = 1e30;
    spec.dt_min = 1e-6;
    const RunOutcome run = integrate(spec);
    CHECK(run.status == RunStatus::dt_underflow);
    CHECK_FALSE(run.blowup_time.has_value());
    CHECK(run.series.back().linf > 10.0);
}

TEST_CASE("zero data stays zero") {
    ProblemSpec spec = small_riesz_problem();
    spec.initial = GaussianData{0.0, 1.0};
    const RunOutcome run = integrate(spec);
    CHECK(run.status == RunStatus::completed);
    for (const auto& s : run.series) {
        CHECK(s.linf == 0.0);
        CHECK(s.mass == 0.0);
    }
}

TEST_CASE("output times and snapshots land exactly") {
    ProblemSpec spec = small_riesz_problem();
    spec.snapshot_times = {0.123, 0.3};
    const RunOutcome run = integrate(spec);
    REQUIRE(run.status == RunStatus::completed);
    REQUIRE(run.snapshots.size() == 2);
    CHECK(run.snapshots[0].t == 0.123);
    CHECK(run.snapshots[1].t == 0.3);
    CHECK(run.series.front().t == 0.0);
    CHECK(run.series.back().t == spec.horizon);
    CHECK(run.series.size() == 11);
    for (std::size_t i = 1; i < run.series.size(); ++i) CHECK(run.series[i].t > run.series[i - 1].t);
}

TEST_CASE("runs are deterministic") {
    const ProblemSpec spec = small_riesz_problem();
    const RunOutcome a = integrate(spec);
    const RunOutcome b = integrate(spec);
    REQUIRE(a.series.size() == b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) CHECK(a.series[i].linf == b.series[i].linf);
    CHECK(a.digest == b.digest);
}

TEST_CASE("nonnegative data: positivity and nondecreasing mass") {
    // Data small enough that the runs stay resolved up to the horizon.
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        ProblemSpec spec = small_riesz_problem();
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> amp(0.1, 0.5);
        std::uniform_real_distribution<double> center(-3.0, 3.0);
        std::uniform_real_distribution<double> beta(0.6, 2.0);
        spec.beta = beta(rng);
        Field u0(spec.grid);
        for (int bump = 0; bump < 3; ++bump) {
            const double a = amp(rng);
            const double c = center(rng);
            for (std::size_t i = 0; i < u0.size(); ++i)
                u0[i] += a * std::exp(-std::pow(spec.grid.coordinate(i) - c, 2));
        }
        spec.initial = CustomData{u0.values};
        spec.record_every_step = true;
        const RunOutcome run = integrate(spec);
        CAPTURE(seed);
        REQUIRE(run.status == RunStatus::completed);
        CHECK(top_third_energy_fraction(forward_transform(*run.final_state)) < 1e-12);
        for (std::size_t i = 0; i < run.series.size(); ++i) {
            const auto& s = run.series[i];
            CHECK(s.min >= -1e-9 * s.linf);
            if (i > 0) CHECK(s.mass >= run.series[i - 1].mass * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("positivity holds on the resolved stretch of a blow-up run") {
    // Close to the blow-up time the peak is no longer resolved and spectral undershoot appears,
    // so only samples with a moderate peak are held to the sign condition.
    ProblemSpec spec = small_riesz_problem();
    spec.initial = GaussianData{1.5, 1.0};
    spec.dealias = false;
    spec.record_every_step = true;
    spec.blowup_factor = 1e3;
    const RunOutcome run = integrate(spec);
    CHECK(run.status == RunStatus::blowup);
    const double linf0 = run.series.front().linf;
    for (const auto& s : run.series)
        if (s.linf <= 10.0 * linf0) CHECK(s.min >= -1e-9 * s.linf);
}

TEST_CASE("nonlinearity: dealiasing removes the top third") {
    const Grid g(1, 128, 20.0);
    const HartreeNonlinearity with(g, KernelSpec::riesz(0.5), 2.0, 1.0, true);
    const HartreeNonlinearity without(g, KernelSpec::riesz(0.5), 2.0, 1.0, false);
    const Field u = oracle::random_field(g, 4);
    const SpectralField a = with.spectral(u);
    const SpectralField b = without.spectral(u);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (std::abs(g.wavenumber(k)) > 128 / 3) CHECK(a[k] == cplx(0.0));
        else CHECK(std::abs(a[k] - b[k]) <= 1e-12 * std::abs(b[k]) + 1e-14);
    }
    CHECK(HartreeNonlinearity(g, KernelSpec::constant(0.0), 2.0, 1.0, true).vanishes());
    CHECK_FALSE(with.vanishes());
}

TEST_CASE("Picard iteration agrees with the time stepper") {
    ProblemSpec spec(Grid(1, 256, 20.0));
    spec.kernel = KernelSpec::riesz(0.5);
    spec.p = 3.0;
    spec.q = 1.0;
    spec.lebesgue_index = 3.0;
    spec.initial = GaussianData{0.5, 1.0};
    const PicardResult picard = picard_local_solve(spec, 0.05, 30);
    CHECK(picard.fixed_point);
    CHECK_FALSE(picard.diverged);
    CHECK(picard.within_theorem_scope);
    for (std::size_t m = 2; m < picard.ratios.size(); ++m) CHECK(picard.ratios[m] < 0.5);

    spec.horizon = 0.05;
    spec.snapshot_times = picard.times;
    const RunOutcome run = integrate(spec);
    REQUIRE(run.snapshots.size() == picard.times.size());
    for (std::size_t j = 0; j < picard.times.size(); ++j)
        CHECK(sup_relative_deviation(picard.trajectory[j], run.snapshots[j].field) <= 1e-4);
}

TEST_CASE("Picard iteration preconditions") {
    ProblemSpec spec(Grid(1, 64, 20.0));
    CHECK_THROWS_AS(picard_local_solve(spec, 0.0, 10), DomainError);
    CHECK_THROWS_AS(picard_local_solve(spec, 0.1, 2), DomainError);
    // Outside the Riesz local theory: p must exceed n/(n - alpha) = 2.
    spec.p = 1.5;
    CHECK_FALSE(picard_local_solve(spec, 0.01, 5, 10).within_theorem_scope);
}

TEST_CASE("scaling check") {
    ProblemSpec spec(Grid(1, 512, 40.0));
    spec.kernel = KernelSpec::riesz(0.5);
    spec.initial = GaussianData{1.0, 1.0};
    const ScalingCheck c = scaling_check(spec, 2.0, 0.2);
    CHECK(c.field_deviation <= 1e-3);
    CHECK(c.norm_deviation <= 1e-10);
    CHECK(c.base_status == RunStatus::completed);
    CHECK(c.scaled_status == RunStatus::completed);

    ProblemSpec bad = spec;
    bad.kernel = KernelSpec::power(1.0, 0.5);
    CHECK_THROWS_AS(scaling_check(bad, 2.0, 0.2), DomainError);
    bad = spec;
    bad.initial = GaussianData{1.0, 0.05};
    CHECK_THROWS_AS(scaling_check(bad, 2.0, 0.2), DomainError);
}
