#include "hartree/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hartree/norms.hpp"
#include "hartree/operators.hpp"
#include "hartree/quadrature.hpp"
#include "hartree/regression.hpp"

namespace hartree {
namespace {

constexpr double pi = std::numbers::pi;
const QuadratureOptions j_quadrature{1e-10, 12};

void require_exponents(double p, double q) {
    if (!(p + q > 2.0)) throw DomainError("capacity: p + q must exceed 2");
}

// Integral of f over [a, b] split at the plateau edge, where the profile stops being flat.
double integrate_split(const std::function<double(double)>& f, double a, double mid, double b) {
    return integrate(f, a, mid, j_quadrature) + integrate(f, mid, b, j_quadrature);
}

double radial_measure(int n, double r) { return n == 1 ? 2.0 : 2.0 * pi * r; }

double last_decade_slope(std::span<const double> radii, std::span<const double> logs) {
    const double r_max = *std::max_element(radii.begin(), radii.end());
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] >= r_max / 10.0 * (1.0 - 1e-12)) {
            lx.push_back(std::log(radii[i]));
            ly.push_back(logs[i]);
        }
    }
    if (lx.size() < 2) throw DomainError("criterion: the last decade of the radius grid needs two or more points");
    return fit_line(lx, ly).slope;
}

void require_span(std::span<const double> radii) {
    if (radii.size() < 2) throw DomainError("criterion: radius grid too short");
    const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
    if (!(*lo > 0.0) || *hi / *lo < 1e4 * (1.0 - 1e-12))
        throw DomainError("criterion: radius grid must be positive and span at least four decades");
}

}  // namespace

TestFunction make_test_function(const CutoffSpec& cut, double R, double T) {
    if (!(R > 0.0 && T > 0.0)) throw DomainError("test function: R and T must be positive");
    return [cut, R, T](double t, std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return std::pow(cut.profile(std::sqrt(r2) / R), cut.ell) * std::pow(cut.profile(t / T), cut.ell);
    };
}

double cutoff_fractional_laplacian(const CutoffSpec& cut, double s, double R, double x, int n, double power) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("cutoff Laplacian: s must lie in (0, 1]");
    if (!(R > 0.0)) throw DomainError("cutoff Laplacian: R must be positive");
    if (n != 1 && n != 2) throw DomainError("cutoff Laplacian: dimension must be 1 or 2");

    if (s == 1.0) {
        const double rho = std::abs(x) / R;
        const double f = cut.profile(rho);
        const double d1 = cut.derivative(rho);
        if (d1 == 0.0 && cut.second_derivative(rho) == 0.0) return 0.0;
        const double d2 = cut.second_derivative(rho);
        const double fp = power * std::pow(f, power - 1.0) * d1;
        double fpp = power * std::pow(f, power - 1.0) * d2;
        if (power != 1.0) fpp += power * (power - 1.0) * std::pow(f, power - 2.0) * d1 * d1;
        const double radial = n == 1 ? fpp : fpp + fp / rho;
        return -radial / (R * R);
    }

    PvQuadratureOptions options;
    options.cutoff_radius = std::abs(x) + R;
    // Panels follow the profile's own length scale R.
    options.panel_width = R;
    options.inner_radius = 1e-6 * R;
    // The profile is flat below plateau*R and above R; it is smooth but not analytic there.
    for (double edge : {cut.plateau * R, R}) {
        options.breakpoints.push_back(std::abs(std::abs(x) - edge));
        options.breakpoints.push_back(std::abs(x) + edge);
    }
    if (n == 1) {
        return fractional_laplacian_quadrature(
            [&](double y) { return std::pow(cut.profile(std::abs(y) / R), power); }, s, x, options);
    }
    return fractional_laplacian_quadrature_2d(
        [&](double a, double b) { return std::pow(cut.profile(std::hypot(a, b) / R), power); }, s, {x, 0.0},
        options);
}

double frac_lap_scaling_check(const CutoffSpec& cut, double s, double R, std::size_t samples) {
    if (samples < 2) throw DomainError("scaling check: need two or more samples");
    double worst = 0.0;
    double scale = 0.0;
    const double factor = std::pow(R, -2.0 * s);
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = -2.0 * R + 4.0 * R * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double lhs = cutoff_fractional_laplacian(cut, s, R, x);
        const double rhs = factor * cutoff_fractional_laplacian(cut, s, 1.0, x / R);
        worst = std::max(worst, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(rhs));
    }
    return scale > 0.0 ? worst / scale : worst;
}

JuMargin ju_inequality_check(const CutoffSpec& cut, double beta, double x_max, std::size_t samples) {
    if (!(beta > 0.0 && beta < 2.0)) throw DomainError("ju_inequality_check: beta must lie in (0, 2)");
    if (samples < 2) throw DomainError("ju_inequality_check: need two or more samples");
    const double s = 0.5 * beta;
    JuMargin out{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = -x_max + 2.0 * x_max * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double lhs = cutoff_fractional_laplacian(cut, s, 1.0, x, 1, cut.ell);
        const double rhs =
            cut.ell * std::pow(cut.profile(std::abs(x)), cut.ell - 1.0) * cutoff_fractional_laplacian(cut, s, 1.0, x);
        out.min_margin = std::min(out.min_margin, rhs - lhs);
        out.scale = std::max({out.scale, std::abs(lhs), std::abs(rhs)});
    }
    return out;
}

double compute_J1(int n, double beta, double p, double q, double R, double T, const CutoffSpec& cut) {
    require_exponents(p, q);
    if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("compute_J1: beta must lie in (0, 2]");
    if (!(R > 0.0 && T > 0.0)) throw DomainError("compute_J1: R and T must be positive");
    const double theta = (p + q - 2.0) / (p + q);
    const double k = (p + q) / (p + q - 2.0);
    const double s = 0.5 * beta;

    const double time_part = integrate_split(
        [&](double t) { return std::pow(cut.profile(t / T), cut.ell); }, 0.0, cut.plateau * T, T);
    const double space_part = integrate_split(
        [&](double r) {
            const double lap = cutoff_fractional_laplacian(cut, s, R, r, n);
            return radial_measure(n, r) * cut.profile(r / R) * std::pow(std::abs(lap), k);
        },
        0.0, cut.plateau * R, R);
    return cut.ell * std::pow(time_part, theta) * std::pow(space_part, theta);
}

double compute_J1(int n, double beta, double p, double q, double R, double T) {
    return compute_J1(n, beta, p, q, R, T, CutoffSpec::for_exponents(p, q));
}

double compute_J2(int n, double beta, double p, double q, double R, double T, const CutoffSpec& cut) {
    require_exponents(p, q);
    if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("compute_J2: beta must lie in (0, 2]");
    if (!(R > 0.0 && T > 0.0)) throw DomainError("compute_J2: R and T must be positive");
    if (n != 1 && n != 2) throw DomainError("compute_J2: dimension must be 1 or 2");
    const double theta = (p + q - 2.0) / (p + q);
    const double k = (p + q) / (p + q - 2.0);

    const double space_part = integrate_split(
        [&](double r) { return radial_measure(n, r) * std::pow(cut.profile(r / R), cut.ell); }, 0.0,
        cut.plateau * R, R);
    const double time_part = integrate(
        [&](double t) {
            const double tau = t / T;
            return cut.profile(tau) * std::pow(std::abs(cut.derivative(tau)) / T, k);
        },
        std::max(0.5, cut.plateau) * T, T, j_quadrature);
    return cut.ell * std::pow(space_part, theta) * std::pow(time_part, theta);
}

double compute_J2(int n, double beta, double p, double q, double R, double T) {
    return compute_J2(n, beta, p, q, R, T, CutoffSpec::for_exponents(p, q));
}

std::string to_string(LimsupVerdict v) {
    switch (v) {
        case LimsupVerdict::diverges: return "diverges";
        case LimsupVerdict::bounded: return "bounded";
        case LimsupVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::string to_string(LiminfVerdict v) {
    switch (v) {
        case LiminfVerdict::vanishes: return "vanishes";
        case LiminfVerdict::bounded_away: return "bounded_away";
        case LiminfVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

CriterionResult<LimsupVerdict> criterion_limsup(const KernelSpec& kernel, int n, double beta, double p, double q,
                                                std::span<const double> radii) {
    require_exponents(p, q);
    require_span(radii);
    kernel.validate(n);
    const double e = -static_cast<double>(n) * (p + q - 2.0) + beta;
    CriterionResult<LimsupVerdict> out{LimsupVerdict::inconclusive, 0.0, {radii.begin(), radii.end()}, {}};
    std::vector<double> logs;
    for (double R : radii) {
        const double lg = std::log(kernel(R, n)) + e * std::log(R);
        logs.push_back(lg);
        out.values.push_back(std::exp(lg));
    }
    out.slope = last_decade_slope(radii, logs);
    if (out.slope > criterion_slope_threshold) out.verdict = LimsupVerdict::diverges;
    else if (out.slope < -criterion_slope_threshold) out.verdict = LimsupVerdict::bounded;
    return out;
}

CriterionResult<LiminfVerdict> criterion_liminf(const KernelSpec& kernel, int n, double beta, double p, double q,
                                                double gamma, std::span<const double> radii) {
    require_exponents(p, q);
    require_span(radii);
    kernel.validate(n);
    if (!(gamma > 0.0)) throw DomainError("criterion_liminf: gamma must be positive");
    const double e = gamma * (p + q - 1.0) - static_cast<double>(n) - beta;
    CriterionResult<LiminfVerdict> out{LiminfVerdict::inconclusive, 0.0, {radii.begin(), radii.end()}, {}};
    std::vector<double> logs;
    for (double R : radii) {
        const double lg = -std::log(kernel(R, n)) + e * std::log(R);
        logs.push_back(lg);
        out.values.push_back(std::exp(lg));
    }
    out.slope = last_decade_slope(radii, logs);
    if (out.slope < -criterion_slope_threshold) out.verdict = LiminfVerdict::vanishes;
    else if (out.slope > criterion_slope_threshold) out.verdict = LiminfVerdict::bounded_away;
    return out;
}

double capacity_mass_bound(const KernelSpec& kernel, int n, double beta, double p, double q, double T) {
    require_exponents(p, q);
    if (!(T > 0.0)) throw DomainError("capacity_mass_bound: T must be positive");
    const double R = std::pow(T, 1.0 / beta);
    const double inner = kernel(2.0 * R, n) * std::pow(T, (-static_cast<double>(n) * (p + q - 2.0) + beta) / beta);
    return std::pow(inner, -1.0 / (p + q - 1.0));
}

std::string to_string(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::nonexistence_mass: return "nonexistence_mass";
        case RegimeLabel::nonexistence_tail: return "nonexistence_tail";
        case RegimeLabel::global_small_data: return "global_small_data";
        case RegimeLabel::open_gap: return "open_gap";
        case RegimeLabel::outside_hypotheses: return "outside_hypotheses";
    }
    return "unknown";
}

RegimeClassification classify_regime(int n, double alpha, double beta, double p, double q,
                                     std::optional<double> gamma) {
    const double dim = static_cast<double>(n);
    if (n < 1) throw DomainError("classify_regime: dimension must be positive");
    if (!(alpha > 0.0 && alpha < dim)) throw DomainError("classify_regime: alpha must lie in (0, n)");
    if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("classify_regime: beta must lie in (0, 2]");
    if (!(p > 1.0)) throw DomainError("classify_regime: p must exceed 1");
    if (!(q >= 1.0)) throw DomainError("classify_regime: q must be >= 1");
    if (gamma && !(*gamma > 0.0)) throw DomainError("classify_regime: gamma must be positive");

    RegimeClassification c{};
    c.p_star = 1.0 + (beta + alpha) / dim;
    c.p_upper = 1.0 + (beta + alpha) / (dim - alpha);
    c.p_sc = c.p_star;
    c.q_sc = dim * (p + q - 1.0) / (beta + alpha);
    c.gamma = gamma;

    const double s = p + q;
    if (alpha + beta > dim && s > 2.0 && s < c.p_star) {
        c.label = RegimeLabel::nonexistence_mass;
    } else if (gamma && *gamma < alpha + beta && s > 2.0 && s < 1.0 + (beta + alpha) / *gamma) {
        c.label = RegimeLabel::nonexistence_tail;
    } else if (s > c.p_upper) {
        c.label = RegimeLabel::global_small_data;
    } else if (s >= c.p_star && s <= c.p_upper) {
        c.label = RegimeLabel::open_gap;
    } else {
        c.label = RegimeLabel::outside_hypotheses;
    }
    return c;
}

CapacityReport capacity_functional(std::span<const Snapshot> trajectory, const KernelSpec& kernel, double beta,
                                   double p, double q, const CutoffSpec& cut, double R, double T) {
    require_exponents(p, q);
    if (!(R > 0.0 && T > 0.0)) throw DomainError("capacity_functional: R and T must be positive");
    if (trajectory.empty()) throw DomainError("capacity_functional: empty trajectory");
    const Grid& grid = trajectory.front().field.grid;
    if (R >= 0.5 * grid.box_length()) throw DomainError("capacity_functional: the ball |x| <= R leaves the box");
    if (trajectory.front().t != 0.0) throw DomainError("capacity_functional: trajectory must start at t = 0");
    if (trajectory.back().t < T * (1.0 - 1e-12)) throw DomainError("capacity_functional: trajectory ends before T");
    for (std::size_t i = 1; i < trajectory.size(); ++i)
        if (!(trajectory[i].t > trajectory[i - 1].t)) throw DomainError("capacity_functional: times must increase");

    const int n = grid.dim();
    const FreeSpaceConvolver convolver(grid, kernel);
    Field spatial(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) spatial[i] = std::pow(cut.profile(grid.radius(i) / R), cut.ell);
    const double w = grid.cell_volume();
    const double half = 0.5 * (p + q);

    CapacityReport report{};
    std::vector<double> a_t, k2_t, pq_t;
    for (const auto& snap : trajectory) {
        if (snap.t > T) break;
        const Field& u = snap.field;
        if (!(u.grid == grid)) throw DomainError("capacity_functional: snapshots on different grids");
        const double time_weight = std::pow(cut.profile(snap.t / T), cut.ell);
        Field density(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) density[i] = std::pow(std::abs(u[i]), p);
        const Field conv = convolver.apply(density);
        double a = 0.0, slice = 0.0, bp = 0.0, bq = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double psi = spatial[i] * time_weight;
            if (psi == 0.0) continue;
            const double m = std::abs(u[i]);
            a += conv[i] * std::pow(m, q) * psi;
            slice += std::pow(m, half) * psi;
            bp += density[i] * psi;
            bq += std::pow(m, q) * psi;
        }
        report.times.push_back(snap.t);
        report.slice_integrals.push_back(w * slice);
        a_t.push_back(w * a);
        k2_t.push_back(w * slice * w * slice);
        pq_t.push_back(w * bp * w * bq);
    }
    auto trapezoid = [&](const std::vector<double>& f) {
        double sum = 0.0;
        for (std::size_t i = 1; i < f.size(); ++i)
            sum += 0.5 * (report.times[i] - report.times[i - 1]) * (f[i] + f[i - 1]);
        return sum;
    };
    report.kernel_at_2R = kernel(2.0 * R, n);
    report.nonlinear_integral = trapezoid(a_t);
    const double k2 = trapezoid(k2_t);
    report.lower_bound = report.kernel_at_2R * k2;
    report.ratio = report.lower_bound > 0.0 ? report.nonlinear_integral / report.lower_bound
                                            : std::numeric_limits<double>::quiet_NaN();
    const double pq = trapezoid(pq_t);
    report.cauchy_schwarz_ratio = pq > 0.0 ? k2 / pq : std::numeric_limits<double>::quiet_NaN();
    report.J1 = compute_J1(n, beta, p, q, R, T, cut);
    report.J2 = compute_J2(n, beta, p, q, R, T, cut);
    return report;
}

}  // namespace hartree
