#include <chrono>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hartree/grid.hpp"
#include "hartree/norms.hpp"
#include "oracles.hpp"

using namespace hartree;

TEST_CASE("grid geometry") {
    const Grid g(1, 64, 8.0);
    CHECK(g.spacing() == doctest::Approx(0.125));
    CHECK(g.coordinate(0) == -4.0);
    CHECK(g.coordinate(g.origin_index()) == 0.0);
    CHECK(g.wavenumber(31) == 31);
    CHECK(g.wavenumber(32) == -32);
    CHECK(g.wavenumber(63) == -1);

    const Grid g2(2, 16, 4.0);
    CHECK(g2.size() == 256);
    CHECK(g2.radius(g2.origin_index()) == 0.0);
    CHECK(g2.cell_volume() == doctest::Approx(0.0625));
}

TEST_CASE("grid rejects unsupported shapes") {
    CHECK_THROWS_AS(Grid(3, 64, 1.0), DomainError);
    CHECK_THROWS_AS(Grid(1, 48, 1.0), DomainError);
    CHECK_THROWS_AS(Grid(1, 16, 1.0), DomainError);
    CHECK_THROWS_AS(Grid(2, 8, 1.0), DomainError);
    CHECK_THROWS_AS(Grid(1, 64, 0.0), DomainError);
    CHECK_THROWS_AS(Grid(1, 64, -1.0), DomainError);
    CHECK_NOTHROW(Grid(2, 16, 1.0));
}

TEST_CASE("forward transform matches the direct sum") {
    const Grid g(1, 64, 10.0);
    const Field f = oracle::random_field(g, 7);
    const auto ref = oracle::naive_dft(f);
    const SpectralField F = forward_transform(f);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        worst = std::max(worst, std::abs(F[k] - ref[k]));
        scale = std::max(scale, std::abs(ref[k]));
    }
    CHECK(worst <= 1e-13 * scale);
}

TEST_CASE("zero mode is the discrete integral") {
    const Grid g(2, 32, 6.0);
    const Field f = oracle::random_field(g, 11);
    CHECK(forward_transform(f).zero_mode().real() == doctest::Approx(integral(f)).epsilon(1e-13));
}

TEST_CASE("round trip and Parseval hold for random fields") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (int dim : {1, 2}) {
            const Grid g(dim, dim == 1 ? 4096 : 64, 3.0 + static_cast<double>(seed));
            const Field f = oracle::random_field(g, seed);
            const SpectralField F = forward_transform(f);
            CHECK(sup_relative_deviation(inverse_transform(F), f) <= 1e-12);

            double energy = 0.0;
            for (double v : f.values) energy += v * v;
            energy *= g.cell_volume();
            double spectral = 0.0;
            for (const auto& c : F.coefficients) spectral += std::norm(c);
            spectral /= g.box_volume();
            CHECK(std::abs(spectral - energy) <= 1e-10 * energy);
            CHECK(hermitian_deviation(F) <= 1e-14);
        }
    }
}

TEST_CASE("transform is linear") {
    const Grid g(1, 128, 5.0);
    const Field a = oracle::random_field(g, 1);
    const Field b = oracle::random_field(g, 2);
    Field combo(g);
    for (std::size_t i = 0; i < g.size(); ++i) combo[i] = 2.0 * a[i] - 3.0 * b[i];
    const auto A = forward_transform(a);
    const auto B = forward_transform(b);
    const auto C = forward_transform(combo);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(C[k] - (2.0 * A[k] - 3.0 * B[k])));
    CHECK(worst <= 1e-12);
}

TEST_CASE("a translation multiplies by a phase referenced to the first sample") {
    const Grid g(1, 64, 2.0 * std::numbers::pi);
    const Field f = sample(g, [](std::span<const double> x) { return std::cos(3.0 * x[0]); });
    const SpectralField F = forward_transform(f);
    // cos(3x) on [-pi, pi): modes +-3 carry L/2 times the phase e^(i 3 pi).
    CHECK(std::abs(F[3] - cplx(-std::numbers::pi, 0.0)) < 1e-12);
    CHECK(std::abs(F[61] - cplx(-std::numbers::pi, 0.0)) < 1e-12);
    CHECK(std::abs(F[0]) < 1e-12);
}

TEST_CASE("non-Hermitian coefficients are rejected by the inverse") {
    const Grid g(1, 64, 1.0);
    SpectralField F(g);
    F[1] = cplx(1.0, 0.0);
    CHECK_THROWS_AS(inverse_transform(F), SpectralStateError);
}

TEST_CASE("zero-mode policies") {
    const Grid g(1, 64, 4.0);
    const Field f = sample(g, [](std::span<const double> x) { return 1.0 + std::sin(2.0 * std::numbers::pi * x[0] / 4.0); });
    const auto F = forward_transform(f);
    const auto sym = [](double k) { return k; };
    CHECK(apply_multiplier(F, Multiplier::radial(g, sym, ZeroModeForceZero{}))[0] == cplx(0.0));
    CHECK(apply_multiplier(F, Multiplier::radial(g, sym, ZeroModeForceOne{}))[0] == F[0]);
    CHECK(apply_multiplier(F, Multiplier::radial(g, sym, ZeroModeOverride{2.5}))[0] == 2.5 * F[0]);
    CHECK(apply_multiplier(F, Multiplier::radial(g, [](double) { return 7.0; }, ZeroModeAsComputed{}))[0] ==
          7.0 * F[0]);
}

TEST_CASE("composition multiplies effective symbols") {
    const Grid g(2, 16, 3.0);
    const Multiplier a = Multiplier::radial(g, [](double k) { return std::exp(-k); }, ZeroModeForceOne{});
    const Multiplier b = Multiplier::radial(g, [](double k) { return k * k; }, ZeroModeOverride{3.0});
    const Multiplier c = compose(a, b);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(c.effective(k) == doctest::Approx(a.effective(k) * b.effective(k)));
    CHECK(c.effective(0) == 3.0);
    CHECK_THROWS_AS(compose(a, Multiplier::radial(Grid(2, 32, 3.0), [](double) { return 1.0; })), DomainError);
}

TEST_CASE("spectral derivative of a periodic function") {
    const Grid g(1, 128, 2.0 * std::numbers::pi);
    const Field f = sample(g, [](std::span<const double> x) { return std::sin(5.0 * x[0]); });
    // -d^2/dx^2 has symbol |xi|^2.
    const Field lap = inverse_transform(apply_multiplier(forward_transform(f), Multiplier::radial(g, [](double k) { return k * k; })));
    Field expected = f;
    for (auto& v : expected.values) v *= 25.0;
    CHECK(oracle::max_abs_diff(lap, expected) < 1e-11);
}

TEST_CASE("n=1, N=4096 round trip finishes well under a second") {
    const Grid g(1, 4096, 50.0);
    const Field f = oracle::random_field(g, 3);
    (void)forward_transform(f);  // plan creation
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 100; ++i) (void)inverse_transform(forward_transform(f));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(seconds < 1.0);
}

TEST_CASE("norms") {
    const Grid g(1, 1024, 40.0);
    const Field f = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    CHECK(integral(f) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::pow(std::numbers::pi / 2.0, 0.25)).epsilon(1e-12));
    CHECK(lp_norm(f, infinity) == 1.0);
    CHECK(sup_norm(f) == 1.0);
    CHECK(min_value(f) > 0.0);
    // Homogeneity.
    Field g3 = f;
    for (auto& v : g3.values) v *= -3.0;
    CHECK(lp_norm(g3, 1.5) == doctest::Approx(3.0 * lp_norm(f, 1.5)));
    CHECK(sup_relative_deviation(f, f) == 0.0);
}
