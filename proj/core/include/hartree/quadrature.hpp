#pragma once

#include <functional>

namespace hartree {

struct QuadratureOptions {
    double relative_tolerance = 1e-11;
    unsigned max_depth = 18;
    /// Error accepted regardless of the integral's size; guards integrands that cancel to rounding.
    double absolute_tolerance = 0.0;
};

/// Adaptive Gauss-Kronrod (31 point) on a finite interval, bisecting until the
/// Kronrod-Gauss difference is below max(relative * L1, absolute).
double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& options = {});

}  // namespace hartree
