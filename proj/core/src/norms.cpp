#include "hartree/norms.hpp"

#include <algorithm>
#include <cmath>

namespace hartree {

double integral(const Field& f) {
    double sum = 0.0;
    for (double v : f.values) sum += v;
    return sum * f.grid.cell_volume();
}

double lp_norm(const Field& f, double r) {
    if (!(r > 0.0)) throw DomainError("lp_norm: exponent must be positive");
    if (std::isinf(r)) return sup_norm(f);
    // Scale by the maximum first so large exponents do not overflow.
    const double peak = sup_norm(f);
    if (peak == 0.0) return 0.0;
    double sum = 0.0;
    for (double v : f.values) sum += std::pow(std::abs(v) / peak, r);
    return peak * std::pow(sum * f.grid.cell_volume(), 1.0 / r);
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const Field& f) {
    return f.values.empty() ? 0.0 : *std::min_element(f.values.begin(), f.values.end());
}

double sup_relative_deviation(const Field& a, const Field& reference) {
    if (!(a.grid == reference.grid)) throw DomainError("sup_relative_deviation: grid mismatch");
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - reference[i]));
    const double scale = sup_norm(reference);
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace hartree
