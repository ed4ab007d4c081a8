#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hartree/grid.hpp"

namespace hartree {

/// Linear fractional heat flow u_t + (-Delta)^(beta/2) u = 0 run for time t.
struct PropagatorSpec {
    double beta;
    double t;

    /// Throws DomainError unless beta in (0, 2] and t >= 0.
    void validate() const;
};

/// exp(-t |xi|^beta) on the lattice; the zero mode is exactly 1.
Multiplier propagator_symbol(const Grid& grid, const PropagatorSpec& spec);

/// The discrete kernel S(., t) centred at the origin, with unit discrete integral.
/// Throws DomainError for t = 0.
Field heat_kernel_values(const PropagatorSpec& spec, const Grid& grid);

/// S(t) * f. Returns f unchanged at t = 0.
Field propagate(const Field& f, const PropagatorSpec& spec);

/**
 * Compares the time-t kernel with t^(-n/beta) S(x t^(-1/beta), 1).
 *
 * The time-1 kernel lives on a grid with the same point count and box length
 * lambda * L * t^(-1/beta), so lambda = 1 maps the two lattices onto each other
 * and other values force interpolation. Whichever kernel has the finer spacing
 * (in x) is evaluated by trigonometric interpolation at the coarse lattice points
 * lying in both boxes. Returns max |a - b| / max |b|.
 */
double self_similarity_check(double beta, double t, double lambda, const Grid& grid);

/// Value at arbitrary points of the trigonometric interpolant of a field.
double trigonometric_interpolate(const SpectralField& spectrum, std::span<const double> x);

/// Raised when the box is too small for the requested propagation time.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DecayFit {
    double slope;
    double expected_slope;
    std::vector<double> times;
    std::vector<double> norms;
    /// Largest kernel value on the box boundary relative to its peak, over the time grid.
    double edge_fraction;
};

/**
 * Fits the slope of log ||S(t) v||_q against log t over t_grid and reports it
 * next to -(n/beta)(1/r - 1/q). Throws TruncationError when the kernel at the
 * box edge exceeds tail_tolerance times its peak at the latest time. Kernels with
 * beta < 2 decay algebraically, so they usually need a looser tolerance than the
 * default.
 */
DecayFit verify_lp_lq(double beta, double r, double q, const Field& v, std::span<const double> t_grid,
                      double tail_tolerance = 1e-10);

}  // namespace hartree
