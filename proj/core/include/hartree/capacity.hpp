#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hartree/cutoff.hpp"
#include "hartree/kernels.hpp"
#include "hartree/solver.hpp"

namespace hartree {

/// psi(t, x) = Phi(|x|/R)^ell Phi(t/T)^ell, with x of length 1 or 2.
using TestFunction = std::function<double(double, std::span<const double>)>;
TestFunction make_test_function(const CutoffSpec& cut, double R, double T);

/**
 * (-Delta)^s applied to Phi(|.|/R)^power in dimension n (1 or 2), at the point
 * (x, 0, ...). Uses the singular-integral quadrature for s < 1 and the radial
 * Laplacian for s = 1.
 */
double cutoff_fractional_laplacian(const CutoffSpec& cut, double s, double R, double x, int n = 1,
                                   double power = 1.0);

/// max over x in [-2R, 2R] of |(-Delta)^s phi_R(x) - R^(-2s) ((-Delta)^s phi)(x/R)|, relative to the
/// largest right-hand side value.
double frac_lap_scaling_check(const CutoffSpec& cut, double s, double R, std::size_t samples = 41);

struct JuMargin {
    /// min over samples of ell phi^(ell-1) (-Delta)^(beta/2) phi - (-Delta)^(beta/2) phi^ell.
    double min_margin;
    /// largest magnitude of either side.
    double scale;
};

/// Samples x uniformly on [-x_max, x_max] with R = 1.
JuMargin ju_inequality_check(const CutoffSpec& cut, double beta, double x_max = 2.0, std::size_t samples = 41);

/// J1 = ell (int_0^T phi_T^ell)^theta (int_B phi_R |(-Delta)^(beta/2) phi_R|^k)^theta,
/// theta = (p+q-2)/(p+q), k = (p+q)/(p+q-2).
double compute_J1(int n, double beta, double p, double q, double R, double T, const CutoffSpec& cut);
double compute_J1(int n, double beta, double p, double q, double R, double T);

/// J2 = ell (int_B phi_R^ell)^theta (int_{T/2}^T phi_T |phi_T'|^k)^theta.
double compute_J2(int n, double beta, double p, double q, double R, double T, const CutoffSpec& cut);
double compute_J2(int n, double beta, double p, double q, double R, double T);

enum class LimsupVerdict { diverges, bounded, inconclusive };
enum class LiminfVerdict { vanishes, bounded_away, inconclusive };
std::string to_string(LimsupVerdict v);
std::string to_string(LiminfVerdict v);

/// Slope threshold separating a trend from "inconclusive" on the last decade.
inline constexpr double criterion_slope_threshold = 0.05;

template <class Verdict>
struct CriterionResult {
    Verdict verdict;
    /// log-log slope over radii within a factor 10 of the largest.
    double slope;
    std::vector<double> radii;
    std::vector<double> values;
};

/// g(R) = K(R) R^(-n(p+q-2)+beta) on a geometric grid spanning at least 4 decades.
CriterionResult<LimsupVerdict> criterion_limsup(const KernelSpec& kernel, int n, double beta, double p, double q,
                                                std::span<const double> radii);

/// h(R) = K(R)^-1 R^(gamma(p+q-1)-n-beta).
CriterionResult<LiminfVerdict> criterion_liminf(const KernelSpec& kernel, int n, double beta, double p, double q,
                                                double gamma, std::span<const double> radii);

/// Right side of the mass bound with R = T^(1/beta) and unit constant:
/// (K(2 T^(1/beta)) T^((-n(p+q-2)+beta)/beta))^(-1/(p+q-1)).
double capacity_mass_bound(const KernelSpec& kernel, int n, double beta, double p, double q, double T);

enum class RegimeLabel { nonexistence_mass, nonexistence_tail, global_small_data, open_gap, outside_hypotheses };
std::string to_string(RegimeLabel label);

struct RegimeClassification {
    double p_star;   // 1 + (beta + alpha)/n
    double p_upper;  // 1 + (beta + alpha)/(n - alpha)
    double p_sc;     // equals p_star
    double q_sc;     // n (p + q - 1)/(beta + alpha)
    std::optional<double> gamma;
    RegimeLabel label;
};

/// Labels are tried in the order of the enum; see README for the exact hypotheses.
RegimeClassification classify_regime(int n, double alpha, double beta, double p, double q,
                                     std::optional<double> gamma = std::nullopt);

struct CapacityReport {
    /// int_0^T int (K * |u|^p)|u|^q psi dx dt.
    double nonlinear_integral;
    /// K(2R) int_0^T (int |u|^((p+q)/2) psi dx)^2 dt.
    double lower_bound;
    /// nonlinear_integral / lower_bound; NaN when the bound vanishes.
    double ratio;
    /// int (int |u|^((p+q)/2) psi)^2 dt / int (int |u|^p psi)(int |u|^q psi) dt; at most 1.
    double cauchy_schwarz_ratio;
    double kernel_at_2R;
    double J1;
    double J2;
    std::vector<double> times;
    std::vector<double> slice_integrals;
};

/**
 * Evaluates both sides of the capacity lower bound on stored snapshots by the
 * trapezoidal rule in time. Snapshots must start at t = 0 and reach T; later
 * ones are ignored. Throws DomainError when the ball |x| <= R leaves the box.
 */
CapacityReport capacity_functional(std::span<const Snapshot> trajectory, const KernelSpec& kernel, double beta,
                                   double p, double q, const CutoffSpec& cut, double R, double T);

}  // namespace hartree
