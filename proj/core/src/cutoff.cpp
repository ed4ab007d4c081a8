#include "hartree/cutoff.hpp"

#include <cmath>

#include "hartree/grid.hpp"

namespace hartree {
namespace {

struct Bump {
    double value;
    double first;
    double second;
};

// h(t) = sigma(g(t)) with g(t) = 1/(1-t) - 1/t, for t in (0, 1).
Bump bump(double t) {
    const double g = 1.0 / (1.0 - t) - 1.0 / t;
    const double e = std::exp(-std::abs(g));
    const double sigma = g >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
    const double slope = e / ((1.0 + e) * (1.0 + e));  // sigma (1 - sigma), no cancellation
    const double g1 = 1.0 / ((1.0 - t) * (1.0 - t)) + 1.0 / (t * t);
    const double g2 = 2.0 / ((1.0 - t) * (1.0 - t) * (1.0 - t)) - 2.0 / (t * t * t);
    return {sigma, slope * g1, slope * (1.0 - 2.0 * sigma) * g1 * g1 + slope * g2};
}

}  // namespace

CutoffSpec CutoffSpec::for_exponents(double p, double q, double plateau) {
    const double s = p + q;
    if (!(s > 2.0)) throw DomainError("cutoff: p + q must exceed 2");
    if (!(plateau > 0.0 && plateau < 1.0)) throw DomainError("cutoff: plateau must lie in (0, 1)");
    return {(2.0 * s - 2.0) / (s - 2.0), plateau};
}

double CutoffSpec::profile(double r) const {
    if (r <= plateau) return 1.0;
    if (r >= 1.0) return 0.0;
    return bump((1.0 - r) / (1.0 - plateau)).value;
}

double CutoffSpec::derivative(double r) const {
    if (r <= plateau || r >= 1.0) return 0.0;
    return -bump((1.0 - r) / (1.0 - plateau)).first / (1.0 - plateau);
}

double CutoffSpec::second_derivative(double r) const {
    if (r <= plateau || r >= 1.0) return 0.0;
    const double w = 1.0 - plateau;
    return bump((1.0 - r) / w).second / (w * w);
}

}  // namespace hartree
