#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hartree {

struct ConstantKernel {
    double value;
};

/// K(r) = coefficient * r^-sigma.
struct PowerKernel {
    double coefficient;
    double sigma;
};

/// K(r) = r^-sigma * ln^delta(1 + r).
struct PowerLogKernel {
    double sigma;
    double delta;
};

/// K(r) = A_alpha * r^-(n - alpha), the Riesz potential kernel.
struct RieszKernel {
    double alpha;
};

/// One term c * r^exponent of the small-r expansion of a kernel.
struct SingularTerm {
    double coefficient;
    double exponent;
};

/**
 * Radial convolution kernel K(|x|) of the nonlinearity.
 *
 * Admissible parameters keep K positive, continuous on (0, inf) and locally
 * integrable in R^n: sigma in (0, n) for the power families (delta > sigma - n
 * for power-log) and alpha in (0, n) for Riesz. tail_threshold is the R_0
 * beyond which K is expected to attain its infimum over (0, R) at R.
 */
struct KernelSpec {
    std::variant<ConstantKernel, PowerKernel, PowerLogKernel, RieszKernel> family;
    double tail_threshold = 2.0;

    static KernelSpec constant(double value);
    static KernelSpec power(double coefficient, double sigma);
    static KernelSpec power_log(double sigma, double delta);
    static KernelSpec riesz(double alpha);

    /// K(r) in dimension n.
    [[nodiscard]] double operator()(double r, int n) const;

    /// Throws DomainError for parameters outside the admissible family in dimension n.
    void validate(int n) const;

    /// Leading non-smooth terms of K near r = 0, used to correct the singular cell.
    [[nodiscard]] std::vector<SingularTerm> local_expansion(int n) const;

    /// Exponent a with K(r) ~ r^-(n - a) at infinity, ignoring logarithms;
    /// n for a constant kernel.
    [[nodiscard]] double effective_alpha(int n) const;

    [[nodiscard]] bool is_riesz() const noexcept { return std::holds_alternative<RieszKernel>(family); }
    [[nodiscard]] std::string describe() const;
};

/**
 * For each R in `radii` (all expected > tail_threshold), compares the minimum
 * of K over a fine sample of (0, R] with K(R) and returns the largest relative
 * gap. Zero means the infimum is attained at R on every sample.
 */
double tail_monotonicity_deviation(const KernelSpec& kernel, int n, std::span<const double> radii,
                                   int samples_per_radius = 4000);

/// The Riesz normalization A_sigma = Gamma((n - sigma)/2) / (Gamma(sigma/2) pi^(n/2) 2^sigma).
struct RieszConstant {
    int n;
    double sigma;
    double value;
};

RieszConstant riesz_constant(int n, double sigma);

}  // namespace hartree
