#pragma once

#include <limits>

#include "hartree/grid.hpp"

namespace hartree {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Discrete integral h^n * sum f.
double integral(const Field& f);

/// (h^n sum |f|^r)^(1/r); r = infinity gives max |f|. Accepts r in (0, inf].
double lp_norm(const Field& f, double r);

double sup_norm(const Field& f);
double min_value(const Field& f);

/// max |a - b| / max |b|, or max |a - b| when b vanishes identically.
double sup_relative_deviation(const Field& a, const Field& reference);

}  // namespace hartree
