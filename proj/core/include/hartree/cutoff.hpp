#pragma once

namespace hartree {

/**
 * Smooth non-increasing profile equal to 1 on (-inf, plateau] and 0 on [1, inf),
 * Phi(r) = h((1 - r) / (1 - plateau)) with the logistic-type bump
 * h(t) = e^(-1/t) / (e^(-1/t) + e^(-1/(1-t))) on (0, 1). `ell` is the power the
 * test function raises it to.
 */
struct CutoffSpec {
    double ell;
    double plateau = 0.5;

    /// ell = (2(p+q) - 2)/(p+q - 2); throws DomainError unless p + q > 2.
    static CutoffSpec for_exponents(double p, double q, double plateau = 0.5);

    [[nodiscard]] double profile(double r) const;
    [[nodiscard]] double derivative(double r) const;
    [[nodiscard]] double second_derivative(double r) const;
};

}  // namespace hartree
