#include "hartree/special.hpp"

#include <cmath>
#include <numbers>

#include "hartree/grid.hpp"

namespace hartree {
namespace {

// Cohen, Rodriguez Villegas and Zagier, "Convergence acceleration of
// alternating series", algorithm 1. Exact to double precision for
// completely monotone terms with about 1.31 digits per term.
template <class Term>
double alternating_sum(Term a, int terms = 48) {
    double d = std::pow(3.0 + std::sqrt(8.0), terms);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0;
    double c = -d;
    double s = 0.0;
    for (int k = 0; k < terms; ++k) {
        c = b - c;
        s += c * a(k);
        b = (static_cast<double>(k) + terms) * (static_cast<double>(k) - terms) * b /
            ((static_cast<double>(k) + 0.5) * (static_cast<double>(k) + 1.0));
    }
    return s / d;
}

}  // namespace

double riemann_zeta(double s) {
    if (s == 1.0) throw DomainError("riemann_zeta: pole at s = 1");
    return std::riemann_zeta(s);
}

double dirichlet_beta(double s) {
    if (s > 0.0) {
        return alternating_sum([s](int k) { return std::pow(2.0 * k + 1.0, -s); });
    }
    // Functional equation beta(1 - z) = (pi/2)^-z sin(pi z / 2) Gamma(z) beta(z), with z = 1 - s >= 1.
    const double z = 1.0 - s;
    return std::pow(0.5 * std::numbers::pi, -z) * std::sin(0.5 * std::numbers::pi * z) * std::tgamma(z) *
           dirichlet_beta(z);
}

double lattice_zeta(int n, double s) {
    if (s == static_cast<double>(n)) throw DomainError("lattice_zeta: pole at s = n");
    switch (n) {
        case 1: return 2.0 * riemann_zeta(s);
        case 2: {
            const double half = 0.5 * s;
            // zeta(half) has its pole at half = 1, i.e. s = n; handled above.
            return 4.0 * riemann_zeta(half) * dirichlet_beta(half);
        }
        default: throw DomainError("lattice_zeta: only n = 1, 2 are supported");
    }
}

}  // namespace hartree
