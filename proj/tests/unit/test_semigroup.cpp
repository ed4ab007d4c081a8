#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hartree/norms.hpp"
#include "hartree/regression.hpp"
#include "hartree/semigroup.hpp"
#include "oracles.hpp"

using namespace hartree;

namespace {

double gaussian_kernel(double x, double t) { return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t); }

// Periodized Cauchy (Poisson) kernel on a box of length L.
double periodic_poisson(double x, double t, double L) {
    const double a = 2.0 * std::numbers::pi / L;
    return std::sinh(a * t) / (L * (std::cosh(a * t) - std::cos(a * x)));
}

}  // namespace

TEST_CASE("beta = 2 kernel is the Gaussian") {
    const Grid g(1, 1024, 64.0);
    for (double t : {0.5, 1.0, 3.0}) {
        const Field k = heat_kernel_values({2.0, t}, g);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(k[i] - gaussian_kernel(g.coordinate(i), t)));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("beta = 2 kernel in two dimensions is the product Gaussian") {
    const Grid g(2, 128, 32.0);
    const Field k = heat_kernel_values({2.0, 1.0}, g);
    double worst = 0.0;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto [i, j] = g.unflatten(flat);
        worst = std::max(worst, std::abs(k[flat] - gaussian_kernel(g.coordinate(i), 1.0) *
                                                       gaussian_kernel(g.coordinate(j), 1.0)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("beta = 1 kernel is the periodized Poisson kernel") {
    const double L = 64.0;
    const Grid g(1, 1024, L);
    const Field k = heat_kernel_values({1.0, 1.0}, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        worst = std::max(worst, std::abs(k[i] - periodic_poisson(g.coordinate(i), 1.0, L)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("unit mass for every admissible beta") {
    const Grid g(1, 1024, 64.0);
    for (double beta : {0.5, 1.0, 1.5, 2.0}) {
        CAPTURE(beta);
        CHECK(std::abs(integral(heat_kernel_values({beta, 1.0}, g)) - 1.0) <= 1e-8);
    }
    const Grid g2(2, 64, 20.0);
    CHECK(std::abs(integral(heat_kernel_values({1.3, 0.7}, g2)) - 1.0) <= 1e-8);
}

TEST_CASE("kernels are nonnegative and symmetric") {
    const Grid g(1, 512, 64.0);
    for (double beta : {0.5, 1.0, 1.5, 2.0}) {
        const Field k = heat_kernel_values({beta, 2.0}, g);
        CHECK(min_value(k) >= -1e-10 * sup_norm(k));
        for (std::size_t i = 1; i < g.size(); ++i) CHECK(k[i] == doctest::Approx(k[g.size() - i]).epsilon(1e-10));
    }
}

TEST_CASE("semigroup property and mass conservation of propagate") {
    const Grid g(1, 512, 40.0);
    const Field f = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]) * (1.0 + 0.3 * x[0]); });
    for (double beta : {0.7, 1.5, 2.0}) {
        const Field two_steps = propagate(propagate(f, {beta, 0.3}), {beta, 0.5});
        const Field one_step = propagate(f, {beta, 0.8});
        CHECK(oracle::max_abs_diff(two_steps, one_step) <= 1e-13);
        CHECK(integral(one_step) == doctest::Approx(integral(f)).epsilon(1e-12));
        // Contraction in L^inf and L^1 for positive kernels.
        CHECK(sup_norm(one_step) <= sup_norm(f) + 1e-14);
    }
}

TEST_CASE("propagate at t = 0 is the identity; kernel at t = 0 is refused") {
    const Grid g(1, 64, 10.0);
    const Field f = oracle::random_field(g, 5);
    CHECK(propagate(f, {1.0, 0.0}).values == f.values);
    CHECK_THROWS_AS(heat_kernel_values({1.0, 0.0}, g), DomainError);
    CHECK_THROWS_AS(propagate(f, {2.5, 1.0}), DomainError);
    CHECK_THROWS_AS(propagate(f, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(propagate(f, {1.0, -1.0}), DomainError);
}

TEST_CASE("propagator symbol pins the zero mode to one") {
    const Grid g(1, 64, 10.0);
    const Multiplier m = propagator_symbol(g, {1.5, 2.0});
    CHECK(m.effective(0) == 1.0);
    CHECK(m.effective(1) == doctest::Approx(std::exp(-2.0 * std::pow(2.0 * std::numbers::pi / 10.0, 1.5))));
}

TEST_CASE("self-similarity of the kernel") {
    const Grid g(1, 1024, 64.0);
    CHECK(self_similarity_check(2.0, 4.0, 1.0, g) <= 1e-12);
    CHECK(self_similarity_check(2.0, 4.0, 2.0, g) <= 1e-4);
    CHECK(self_similarity_check(1.5, 2.0, 2.0, Grid(1, 2048, 256.0)) <= 1e-4);
    CHECK(self_similarity_check(1.0, 3.0, 1.0, Grid(1, 2048, 256.0)) <= 1e-12);
}

TEST_CASE("trigonometric interpolation reproduces band-limited data") {
    const Grid g(1, 64, 2.0 * std::numbers::pi);
    const Field f = sample(g, [](std::span<const double> x) { return std::cos(2.0 * x[0]) + 0.5 * std::sin(5.0 * x[0]); });
    const auto F = forward_transform(f);
    for (double x : {-3.0, -0.123, 0.0, 1.7, 3.1}) {
        const double y[1] = {x};
        CHECK(trigonometric_interpolate(F, y) == doctest::Approx(std::cos(2.0 * x) + 0.5 * std::sin(5.0 * x)).epsilon(1e-12));
    }
}

TEST_CASE("L1 to Linf decay slope is -n/beta") {
    const Grid g(1, 4096, 1024.0);
    const Field v = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    const auto times = geometric_grid(10.0, 1000.0, 9);
    const DecayFit fit = verify_lp_lq(2.0, 1.0, infinity, v, times);
    CHECK(fit.expected_slope == doctest::Approx(-0.5));
    CHECK(std::abs(fit.slope / fit.expected_slope - 1.0) <= 0.05);
    CHECK(fit.edge_fraction <= 1e-10);
}

TEST_CASE("L1 to L2 decay for the Poisson semigroup") {
    // Algebraic tails need a wide box: the periodized kernel has edge to peak ratio
    // tanh^2(pi t / L), about 6e-4 at t = 1000 here.
    const Grid g(1, 131072, 131072.0);
    const Field v = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 16.0); });
    const auto times = geometric_grid(10.0, 1000.0, 9);
    const DecayFit fit = verify_lp_lq(1.0, 1.0, 2.0, v, times, 1e-3);
    CHECK(fit.expected_slope == doctest::Approx(-0.5));
    CHECK(std::abs(fit.slope / fit.expected_slope - 1.0) <= 0.05);
}

TEST_CASE("decay fit refuses a box too small for the latest time") {
    const Grid g(1, 256, 20.0);
    const Field v = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    const auto times = geometric_grid(1.0, 100.0, 5);
    CHECK_THROWS_AS(verify_lp_lq(2.0, 1.0, infinity, v, times), TruncationError);
}
