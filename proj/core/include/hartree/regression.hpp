#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hartree {

struct LineFit {
    double slope;
    double intercept;
    double r_squared;
};

/// Ordinary least squares y = slope * x + intercept. Needs two distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fit of log y against log x; all values must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// `count` points from first to last inclusive, equally spaced in log.
std::vector<double> geometric_grid(double first, double last, std::size_t count);

}  // namespace hartree
