#include "hartree/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "hartree/log.hpp"
#include "hartree/norms.hpp"
#include "hartree/quadrature.hpp"
#include "hartree/special.hpp"

namespace hartree {
namespace {

constexpr double pi = std::numbers::pi;

// Panel boundaries of the graded near-field region: 1, 1/2, 1/4, ... down to inner.
std::vector<double> graded_breaks(double inner) {
    std::vector<double> b{1.0};
    while (b.back() * 0.5 > inner) b.push_back(b.back() * 0.5);
    b.push_back(inner);
    return b;
}

// Panel ends in [inner, cutoff]: the graded breaks, unit panels beyond 1 and user breakpoints.
std::vector<double> panel_ends(const PvQuadratureOptions& options, double cutoff) {
    std::vector<double> ends = graded_breaks(options.inner_radius);
    for (double a = 1.0 + options.panel_width; a < cutoff; a += options.panel_width) ends.push_back(a);
    ends.push_back(cutoff);
    for (double b : options.breakpoints)
        if (b > options.inner_radius && b < cutoff) ends.push_back(b);
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    return ends;
}

void check_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional Laplacian quadrature: s must lie in (0, 1)");
}

// Rounding floor for the integral of a second difference times y^(-1-2s) over [a, b].
double panel_floor(double magnitude, double s, double a, double b) {
    return 1e-14 * magnitude * (std::pow(a, -2.0 * s) - std::pow(b, -2.0 * s)) / (2.0 * s);
}

double checked(double value) {
    if (!std::isfinite(value)) throw std::runtime_error("fractional Laplacian quadrature: non-finite result");
    return value;
}

}  // namespace

double top_third_energy_fraction(const SpectralField& spectrum) {
    const Grid& g = spectrum.grid;
    const long limit = static_cast<long>(g.points_per_axis() / 3);
    double total = 0.0;
    double high = 0.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double e = std::norm(spectrum[k]);
        total += e;
        const auto [i, j] = g.unflatten(k);
        const bool outside = std::abs(g.wavenumber(i)) > limit || (g.dim() == 2 && std::abs(g.wavenumber(j)) > limit);
        if (outside) high += e;
    }
    return total > 0.0 ? high / total : 0.0;
}

Field fractional_laplacian_spectral(const Field& f, double beta) {
    if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("fractional Laplacian: beta must lie in (0, 2]");
    SpectralField spectrum = forward_transform(f);
    const double tail = top_third_energy_fraction(spectrum);
    if (tail > 1e-6) {
        std::ostringstream os;
        os << "fractional Laplacian: top-third spectral energy fraction " << tail
           << " exceeds 1e-6; field is under-resolved";
        warn(os.str());
    }
    const auto symbol = Multiplier::radial(
        f.grid, [beta](double xi) { return std::pow(xi, beta); }, ZeroModeForceZero{});
    apply_multiplier_in_place(spectrum, symbol);
    return inverse_transform(spectrum);
}

double fractional_laplacian_constant(int n, double s) {
    const double dim = static_cast<double>(n);
    return std::pow(4.0, s) * std::tgamma(0.5 * dim + s) / (std::pow(pi, 0.5 * dim) * std::abs(std::tgamma(-s)));
}

double fractional_laplacian_quadrature(const std::function<double(double)>& v, double s, double x,
                                       const PvQuadratureOptions& options) {
    check_order(s);
    const double v0 = v(x);
    const double exponent = -1.0 - 2.0 * s;
    auto second_difference = [&](double y) { return v(x + y) + v(x - y) - 2.0 * v0; };
    auto integrand = [&](double y) { return second_difference(y) * std::pow(y, exponent); };
    const double cutoff = std::max(options.cutoff_radius, 1.0);
    const auto ends = panel_ends(options, cutoff);
    double magnitude = std::max(std::abs(v0), std::abs(options.far_value));
    for (double e : ends) magnitude = std::max({magnitude, std::abs(v(x + e)), std::abs(v(x - e))});

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const QuadratureOptions quad{options.relative_tolerance, 18, panel_floor(magnitude, s, ends[i], ends[i + 1])};
        total += integrate(integrand, ends[i], ends[i + 1], quad);
    }

    // Inside the innermost radius the second difference is ~ v''(x) y^2. The curvature is
    // read off at sqrt(eps), where the difference is not yet dominated by cancellation.
    const double eps = ends.front();
    const double yc = std::sqrt(eps);
    total += second_difference(yc) / (yc * yc) * std::pow(eps, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    total += (2.0 * options.far_value - 2.0 * v0) * std::pow(cutoff, -2.0 * s) / (2.0 * s);

    return checked(-fractional_laplacian_constant(1, s) * total);
}

double fractional_laplacian_quadrature(const std::function<double(double)>& v, double s, double x,
                                       double cutoff_radius) {
    PvQuadratureOptions options;
    options.cutoff_radius = cutoff_radius;
    return fractional_laplacian_quadrature(v, s, x, options);
}

double fractional_laplacian_quadrature_2d(const std::function<double(double, double)>& v, double s,
                                          std::array<double, 2> x, const PvQuadratureOptions& options) {
    check_order(s);
    const double v0 = v(x[0], x[1]);
    const double cutoff = std::max(options.cutoff_radius, 1.0);
    const auto ends = panel_ends(options, cutoff);
    double magnitude = std::max(std::abs(v0), std::abs(options.far_value));
    for (double e : ends) {
        magnitude = std::max({magnitude, std::abs(v(x[0] + e, x[1])), std::abs(v(x[0] - e, x[1])),
                              std::abs(v(x[0], x[1] + e)), std::abs(v(x[0], x[1] - e))});
    }
    const QuadratureOptions inner_quad{options.relative_tolerance, 12, 1e-14 * magnitude * pi};

    // Angular integral of the second difference over a half circle (it is even in y).
    auto angular = [&](double rho) {
        return integrate(
            [&](double theta) {
                const double c = rho * std::cos(theta);
                const double d = rho * std::sin(theta);
                return v(x[0] + c, x[1] + d) + v(x[0] - c, x[1] - d) - 2.0 * v0;
            },
            0.0, pi, inner_quad);
    };
    const double exponent = -1.0 - 2.0 * s;
    auto integrand = [&](double rho) { return angular(rho) * std::pow(rho, exponent); };

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const QuadratureOptions outer_quad{options.relative_tolerance, 14,
                                           pi * panel_floor(magnitude, s, ends[i], ends[i + 1])};
        total += integrate(integrand, ends[i], ends[i + 1], outer_quad);
    }

    const double eps = ends.front();
    const double yc = std::sqrt(eps);
    total += angular(yc) / (yc * yc) * std::pow(eps, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    total += (2.0 * options.far_value - 2.0 * v0) * pi * std::pow(cutoff, -2.0 * s) / (2.0 * s);

    return checked(-fractional_laplacian_constant(2, s) * total);
}

FreeSpaceConvolver::FreeSpaceConvolver(const Grid& grid, const KernelSpec& kernel, SingularCellRule rule)
    : grid_(grid), kernel_(kernel), padded_(2 * grid.points_per_axis()) {
    const int n = grid.dim();
    kernel.validate(n);

    const std::size_t N = grid.points_per_axis();
    const std::size_t M = padded_;
    const std::size_t total = n == 1 ? M : M * M;
    const double h = grid.spacing();
    const double hn = grid.cell_volume();

    auto offset = [N, M](std::size_t idx) {
        return idx < N ? static_cast<double>(idx) : static_cast<double>(idx) - static_cast<double>(M);
    };
    std::vector<cplx> weights(total, cplx{0.0, 0.0});
    for (std::size_t a = 0; a < total; ++a) {
        const std::size_t ia = n == 1 ? a : a / M;
        const std::size_t ib = n == 1 ? 0 : a % M;
        const double r = h * std::hypot(offset(ia), offset(ib));
        if (r == 0.0) continue;
        weights[a] = kernel(r, n) * hn;
    }

    const auto terms = kernel.local_expansion(n);
    double centre = 0.0;
    double axis = 0.0;
    if (rule == SingularCellRule::zeta_corrected) {
        for (const auto& term : terms) {
            const double base = term.coefficient * std::pow(h, static_cast<double>(n) + term.exponent);
            const double z0 = lattice_zeta(n, -term.exponent);
            const double z2 = lattice_zeta(n, -term.exponent - 2.0);
            centre += base * (z2 - z0);
            axis += -base * z2 / (2.0 * n);
        }
    } else {
        const auto& lead = terms.front();
        const double g = lead.exponent;
        if (n == 1) {
            centre = 2.0 * lead.coefficient * std::pow(0.5 * h, g + 1.0) / (g + 1.0);
        } else {
            const double rho = h / std::sqrt(pi);
            centre = 2.0 * pi * lead.coefficient * std::pow(rho, g + 2.0) / (g + 2.0);
        }
    }
    centre_weight_ = centre;
    weights[0] += centre;
    if (axis != 0.0) {
        if (n == 1) {
            weights[1] += axis;
            weights[M - 1] += axis;
        } else {
            weights[1] += axis;
            weights[M - 1] += axis;
            weights[M] += axis;
            weights[(M - 1) * M] += axis;
        }
    }

    kernel_spectrum_.resize(total);
    detail::dft(weights, kernel_spectrum_, n, M, detail::FftDirection::forward);
}

Field FreeSpaceConvolver::apply(const Field& g) const {
    if (!(g.grid == grid_)) throw DomainError("FreeSpaceConvolver: grid mismatch");
    const int n = grid_.dim();
    const std::size_t N = grid_.points_per_axis();
    const std::size_t M = padded_;
    const std::size_t total = kernel_spectrum_.size();

    std::vector<cplx> buffer(total, cplx{0.0, 0.0});
    if (n == 1) {
        for (std::size_t i = 0; i < N; ++i) buffer[i] = g[i];
    } else {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) buffer[i * M + j] = g[i * N + j];
    }
    std::vector<cplx> spectrum(total);
    detail::dft(buffer, spectrum, n, M, detail::FftDirection::forward);
    for (std::size_t k = 0; k < total; ++k) spectrum[k] *= kernel_spectrum_[k];
    detail::dft(spectrum, buffer, n, M, detail::FftDirection::backward);

    const double scale = 1.0 / static_cast<double>(total);
    Field out(grid_);
    if (n == 1) {
        for (std::size_t i = 0; i < N; ++i) out[i] = buffer[i].real() * scale;
    } else {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) out[i * N + j] = buffer[i * M + j].real() * scale;
    }
    return out;
}

Field riesz_potential(const Field& f, double alpha, RieszBackend backend) {
    const int n = f.grid.dim();
    if (!(alpha > 0.0 && alpha < static_cast<double>(n))) throw DomainError("riesz_potential: alpha must lie in (0, n)");
    if (backend == RieszBackend::free_space_kernel) {
        return FreeSpaceConvolver(f.grid, KernelSpec::riesz(alpha)).apply(f);
    }
    SpectralField spectrum = forward_transform(f);
    const auto symbol = Multiplier::radial(
        f.grid, [alpha](double xi) { return std::pow(xi, -alpha); }, ZeroModeForceZero{});
    apply_multiplier_in_place(spectrum, symbol);
    return inverse_transform(spectrum);
}

Field kernel_convolution(const KernelSpec& kernel, const Field& g) {
    kernel.validate(g.grid.dim());
    if (const auto* riesz = std::get_if<RieszKernel>(&kernel.family)) {
        return riesz_potential(g, riesz->alpha, RieszBackend::free_space_kernel);
    }
    return FreeSpaceConvolver(g.grid, kernel).apply(g);
}

Field hartree_rhs(const Field& u, double p, double q, const KernelSpec& kernel) {
    Field up(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) up[i] = std::pow(std::abs(u[i]), p);
    Field out = kernel_convolution(kernel, up);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] *= std::pow(std::abs(u[i]), q);
    return out;
}

double hls_ratio(const Field& f, double kernel_exponent, double p, double r) {
    const double n = static_cast<double>(f.grid.dim());
    if (!(1.0 < p && p < r && std::isfinite(r))) throw DomainError("hls_ratio: need 1 < p < r < inf");
    if (!(kernel_exponent > 0.0 && kernel_exponent < n)) throw DomainError("hls_ratio: need 0 < alpha < n");
    if (std::abs(1.0 / p + kernel_exponent / n - 1.0 - 1.0 / r) > 1e-12)
        throw DomainError("hls_ratio: exponents violate 1/p + alpha/n = 1 + 1/r");
    const double denominator = lp_norm(f, p);
    if (denominator == 0.0) return 0.0;
    const Field conv = FreeSpaceConvolver(f.grid, KernelSpec::power(1.0, kernel_exponent)).apply(f);
    return lp_norm(conv, r) / denominator;
}

}  // namespace hartree
