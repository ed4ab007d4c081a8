#include "hartree/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hartree {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
using Gauss = boost::math::quadrature::gauss<double, 15>;

struct RuleResult {
    double kronrod;
    double error;
    double l1;
};

// The 15 Gauss nodes are the even-indexed Kronrod nodes; abscissa()[0] is the centre.
RuleResult apply_rule(const std::function<double(double)>& f, double a, double b) {
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double k = wk[0] * f0;
    double l1 = wk[0] * std::abs(f0);
    double g = wg[0] * f0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(c + h * x[i]);
        const double fm = f(c - h * x[i]);
        k += wk[i] * (fp + fm);
        l1 += wk[i] * (std::abs(fp) + std::abs(fm));
        if (i % 2 == 0) g += wg[i / 2] * (fp + fm);
    }
    return {k * h, std::abs((k - g) * h), l1 * std::abs(h)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double relative, double absolute,
             unsigned depth) {
    const auto [estimate, error, l1] = apply_rule(f, a, b);
    if (depth == 0 || error <= std::max(relative * l1, absolute) || !std::isfinite(estimate)) return estimate;
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, relative, 0.5 * absolute, depth - 1) + adapt(f, mid, b, relative, 0.5 * absolute, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& options) {
    if (a == b) return 0.0;
    return adapt(f, a, b, options.relative_tolerance, options.absolute_tolerance, options.max_depth);
}

}  // namespace hartree
