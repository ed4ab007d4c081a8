#pragma once

namespace hartree {

/// Riemann zeta, analytically continued (s != 1).
double riemann_zeta(double s);

/// Dirichlet beta: sum_{k>=0} (-1)^k (2k+1)^-s, analytically continued to all real s.
double dirichlet_beta(double s);

/**
 * Punctured lattice sum Z_n(s) = sum_{j in Z^n, j != 0} |j|^-s, analytically
 * continued. n = 1 gives 2 zeta(s); n = 2 uses the square-lattice identity
 * Z_2(s) = 4 zeta(s/2) beta(s/2). Pole at s = n.
 */
double lattice_zeta(int n, double s);

}  // namespace hartree
