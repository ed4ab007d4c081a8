#pragma once

#include <cstddef>
#include <vector>

#include "hartree/solver.hpp"

namespace hartree {

struct PicardResult {
    /// Uniform mesh t_j = j T_local / M, j = 0..M.
    std::vector<double> times;
    /// The last iterate at each mesh time.
    std::vector<Field> trajectory;
    /// d(u^(m+1), u^m) for m = 0, 1, ...
    std::vector<double> distances;
    /// distances[m] / distances[m-1].
    std::vector<double> ratios;
    std::size_t iterations = 0;
    bool fixed_point = false;
    /// Three consecutive ratios >= 1.
    bool diverged = false;
    /// Whether the Riesz-kernel hypotheses p > n/(n-alpha), n/(n-alpha) < s < n(p-1)/alpha hold.
    bool within_theorem_scope = false;
};

/**
 * Picard iteration for the Duhamel formula on [0, T_local]:
 *   u^(m+1)(t_j) = S(t_j) u0 + sum_i w_i S(t_j - t_i) N(u^m(t_i)),
 * trapezoidal weights w_i in time, starting from u^0(t) = S(t) u0. The distance
 * is sup_j (||.||_{L^s} + ||.||_inf) with s = spec.lebesgue_index. Stops at a
 * fixed point (distance below 1e-14 of the trajectory scale), on divergence, or
 * after max_iter iterations.
 */
PicardResult picard_local_solve(const ProblemSpec& spec, double t_local, std::size_t max_iter,
                                std::size_t mesh_intervals = 100);

}  // namespace hartree
