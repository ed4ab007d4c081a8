#include "hartree/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hartree/norms.hpp"
#include "hartree/regression.hpp"

namespace hartree {
namespace {

Field propagate_unchecked(const Field& f, const PropagatorSpec& spec) {
    SpectralField spectrum = forward_transform(f);
    apply_multiplier_in_place(spectrum, propagator_symbol(f.grid, spec));
    return inverse_transform(spectrum);
}

// Kernel magnitude on the boundary row/column x = -L/2, relative to the peak.
double edge_fraction(const Field& kernel) {
    const Grid& g = kernel.grid;
    const std::size_t n = g.points_per_axis();
    double edge = 0.0;
    if (g.dim() == 1) {
        edge = std::abs(kernel[0]);
    } else {
        for (std::size_t i = 0; i < n; ++i) edge = std::max({edge, std::abs(kernel[i]), std::abs(kernel[i * n])});
    }
    const double peak = sup_norm(kernel);
    return peak > 0.0 ? edge / peak : 0.0;
}

}  // namespace

void PropagatorSpec::validate() const {
    if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("propagator: beta must lie in (0, 2]");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("propagator: t must be finite and >= 0");
}

Multiplier propagator_symbol(const Grid& grid, const PropagatorSpec& spec) {
    spec.validate();
    const double beta = spec.beta;
    const double t = spec.t;
    return Multiplier::radial(
        grid, [beta, t](double xi) { return std::exp(-t * std::pow(xi, beta)); }, ZeroModeForceOne{});
}

Field heat_kernel_values(const PropagatorSpec& spec, const Grid& grid) {
    spec.validate();
    if (spec.t == 0.0) throw DomainError("heat kernel: t = 0 is a delta and cannot be sampled");
    Field delta(grid);
    delta[grid.origin_index()] = 1.0 / grid.cell_volume();
    return propagate_unchecked(delta, spec);
}

Field propagate(const Field& f, const PropagatorSpec& spec) {
    spec.validate();
    if (spec.t == 0.0) return f;
    return propagate_unchecked(f, spec);
}

double trigonometric_interpolate(const SpectralField& spectrum, std::span<const double> x) {
    const Grid& g = spectrum.grid;
    const std::size_t n = g.points_per_axis();
    const double x0 = g.coordinate(0);
    auto phases = [&](double coord) {
        std::vector<cplx> e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = std::polar(1.0, g.frequency(i) * (coord - x0));
        return e;
    };
    cplx sum{0.0, 0.0};
    if (g.dim() == 1) {
        const auto e = phases(x[0]);
        for (std::size_t i = 0; i < n; ++i) sum += spectrum[i] * e[i];
    } else {
        const auto e0 = phases(x[0]);
        const auto e1 = phases(x[1]);
        for (std::size_t i = 0; i < n; ++i) {
            cplx row{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) row += spectrum[i * n + j] * e1[j];
            sum += row * e0[i];
        }
    }
    return sum.real() / g.box_volume();
}

double self_similarity_check(double beta, double t, double lambda, const Grid& grid) {
    if (!(t > 0.0 && lambda > 0.0)) throw DomainError("self_similarity_check: need t > 0 and lambda > 0");
    const int n = grid.dim();
    const double dilation = std::pow(t, 1.0 / beta);  // x = dilation * x'
    const double amplitude = std::pow(t, -static_cast<double>(n) / beta);

    const Field at_t = heat_kernel_values({beta, t}, grid);
    const Grid unit_grid(n, grid.points_per_axis(), lambda * grid.box_length() / dilation);
    const Field at_one = heat_kernel_values({beta, 1.0}, unit_grid);

    std::vector<double> lhs;
    std::vector<double> rhs;
    if (lambda == 1.0) {
        lhs = at_t.values;
        rhs = at_one.values;
        for (double& v : rhs) v *= amplitude;
    } else if (lambda > 1.0) {
        // The rescaled unit grid is coarser in x: sample it directly, interpolate the time-t kernel.
        const SpectralField fine = forward_transform(at_t);
        const double half = 0.5 * grid.box_length();
        std::array<double, 2> xp{};
        std::array<double, 2> x{};
        for (std::size_t flat = 0; flat < unit_grid.size(); ++flat) {
            const auto [i, j] = unit_grid.unflatten(flat);
            xp = {unit_grid.coordinate(i), unit_grid.coordinate(j)};
            x = {dilation * xp[0], dilation * xp[1]};
            if (std::abs(x[0]) >= half || (n == 2 && std::abs(x[1]) >= half)) continue;
            lhs.push_back(trigonometric_interpolate(fine, std::span<const double>(x.data(), n)));
            rhs.push_back(amplitude * at_one[flat]);
        }
    } else {
        const SpectralField fine = forward_transform(at_one);
        const double half = 0.5 * unit_grid.box_length();
        std::array<double, 2> xp{};
        for (std::size_t flat = 0; flat < grid.size(); ++flat) {
            const auto [i, j] = grid.unflatten(flat);
            xp = {grid.coordinate(i) / dilation, grid.coordinate(j) / dilation};
            if (std::abs(xp[0]) >= half || (n == 2 && std::abs(xp[1]) >= half)) continue;
            lhs.push_back(at_t[flat]);
            rhs.push_back(amplitude * trigonometric_interpolate(fine, std::span<const double>(xp.data(), n)));
        }
    }
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
        scale = std::max(scale, std::abs(rhs[k]));
    }
    return scale > 0.0 ? worst / scale : worst;
}

DecayFit verify_lp_lq(double beta, double r, double q, const Field& v, std::span<const double> t_grid,
                      double tail_tolerance) {
    if (!(1.0 <= r && r <= q)) throw DomainError("verify_lp_lq: need 1 <= r <= q <= inf");
    if (t_grid.size() < 2) throw DomainError("verify_lp_lq: need at least two times");
    const auto [t_min, t_max] = std::minmax_element(t_grid.begin(), t_grid.end());
    if (!(*t_min > 0.0)) throw DomainError("verify_lp_lq: times must be positive");

    DecayFit fit{};
    fit.edge_fraction = edge_fraction(heat_kernel_values({beta, *t_max}, v.grid));
    if (fit.edge_fraction > tail_tolerance) {
        throw TruncationError("verify_lp_lq: kernel at the box edge is " + std::to_string(fit.edge_fraction) +
                              " of its peak at the latest time; enlarge the box");
    }
    const double n = static_cast<double>(v.grid.dim());
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    fit.expected_slope = -(n / beta) * (1.0 / r - inv_q);
    for (double t : t_grid) {
        fit.times.push_back(t);
        fit.norms.push_back(lp_norm(propagate(v, {beta, t}), q));
    }
    fit.slope = fit_loglog(fit.times, fit.norms).slope;
    return fit;
}

}  // namespace hartree
