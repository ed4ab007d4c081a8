#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "hartree/grid.hpp"
#include "hartree/kernels.hpp"

namespace hartree {

/// Spectral fractional Laplacian: inverse transform of |xi|^beta f^, zero mode annihilated.
/// beta must lie in (0, 2]. Warns when more than 1e-6 of the spectral energy sits in
/// the top third of the lattice, since the result is then resolution-limited.
Field fractional_laplacian_spectral(const Field& f, double beta);

/// Fraction of sum |F|^2 carried by modes with some |k_axis| > N/3.
double top_third_energy_fraction(const SpectralField& spectrum);

/// c_{n,s} = 4^s Gamma(n/2 + s) / (pi^(n/2) |Gamma(-s)|), the positive constant of the
/// singular-integral form of (-Delta)^s.
double fractional_laplacian_constant(int n, double s);

struct PvQuadratureOptions {
    /// Integration radius; beyond it v is replaced by far_value.
    double cutoff_radius = 1e3;
    /// Value of v far from the evaluation point (0 for decaying functions).
    double far_value = 0.0;
    /// Smallest radius of the geometric grading near the singularity.
    double inner_radius = 1e-6;
    /// Maximum panel width beyond radius 1.
    double panel_width = 1.0;
    double relative_tolerance = 1e-11;
    /// Extra radii |y| at which panels are split, e.g. where v stops being analytic.
    std::vector<double> breakpoints;
};

/**
 * (-Delta)^s v(x) for s in (0, 1) in one dimension, from the symmetrized form
 *   -c_{1,s} int_0^inf (v(x+y) + v(x-y) - 2 v(x)) y^(-1-2s) dy.
 * Panels halve geometrically from 1 down to inner_radius; inside it the second
 * difference is extrapolated quadratically. The tail beyond cutoff_radius is
 * added in closed form assuming v = far_value there.
 */
double fractional_laplacian_quadrature(const std::function<double(double)>& v, double s, double x,
                                       const PvQuadratureOptions& options);
double fractional_laplacian_quadrature(const std::function<double(double)>& v, double s, double x,
                                       double cutoff_radius);

/// Two-dimensional version in polar coordinates about x.
double fractional_laplacian_quadrature_2d(const std::function<double(double, double)>& v, double s,
                                          std::array<double, 2> x, const PvQuadratureOptions& options);

/// How the free-space convolution weights the cell containing the singularity.
enum class SingularCellRule {
    /// Punctured trapezoid plus lattice-zeta corrections on the centre cell and its
    /// axis neighbours; error O(h^(n+gamma+4)) for a kernel term r^gamma.
    zeta_corrected,
    /// Centre cell replaced by the analytic average of the leading term over the
    /// cell (1D) or the equal-area disc (2D); error O(h^(n+gamma)).
    cell_average,
};

/**
 * Free-space (aperiodic) discrete convolution with a radial kernel, computed by
 * FFT on a grid zero-padded to 2N points per axis. The kernel spectrum is
 * computed once; apply() may be called concurrently.
 */
class FreeSpaceConvolver {
public:
    FreeSpaceConvolver(const Grid& grid, const KernelSpec& kernel,
                       SingularCellRule rule = SingularCellRule::zeta_corrected);

    [[nodiscard]] Field apply(const Field& g) const;
    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const KernelSpec& kernel() const noexcept { return kernel_; }
    /// Weight applied to g at the evaluation point itself.
    [[nodiscard]] double centre_weight() const noexcept { return centre_weight_; }

private:
    Grid grid_;
    KernelSpec kernel_;
    std::size_t padded_;
    std::vector<cplx> kernel_spectrum_;
    double centre_weight_ = 0.0;
};

enum class RieszBackend { spectral, free_space_kernel };

/**
 * I_alpha f. The spectral backend applies |xi|^-alpha with the zero mode forced
 * to zero, so it is the periodic potential and only matches the free-space one
 * for fields whose low moments vanish. The free-space backend is the reference.
 */
Field riesz_potential(const Field& f, double alpha, RieszBackend backend);

/// K * g by free-space convolution; Riesz kernels go through riesz_potential.
Field kernel_convolution(const KernelSpec& kernel, const Field& g);

/// (K * |u|^p) |u|^q.
Field hartree_rhs(const Field& u, double p, double q, const KernelSpec& kernel);

/**
 * || |x|^-alpha * f ||_r / ||f||_p with the free-space convolution, for exponents
 * satisfying 1/p + alpha/n = 1 + 1/r (to 1e-12). Returns 0 for f = 0.
 */
double hls_ratio(const Field& f, double kernel_exponent, double p, double r);

}  // namespace hartree
