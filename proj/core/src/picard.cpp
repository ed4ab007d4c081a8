#include "hartree/picard.hpp"

#include <algorithm>
#include <cmath>

#include "hartree/norms.hpp"

namespace hartree {
namespace {

double distance(const std::vector<Field>& a, const std::vector<Field>& b, double s) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        Field d(a[j].grid);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[j][i] - b[j][i];
        worst = std::max(worst, lp_norm(d, s) + sup_norm(d));
    }
    return worst;
}

bool theorem_scope(const ProblemSpec& spec) {
    const auto* riesz = std::get_if<RieszKernel>(&spec.kernel.family);
    if (riesz == nullptr) return false;
    const double n = static_cast<double>(spec.grid.dim());
    const double lower = n / (n - riesz->alpha);
    const double s = spec.lebesgue_index;
    return spec.p > lower && s > lower && s < n * (spec.p - 1.0) / riesz->alpha;
}

}  // namespace

PicardResult picard_local_solve(const ProblemSpec& spec, double t_local, std::size_t max_iter,
                                std::size_t mesh_intervals) {
    spec.validate();
    if (!(t_local > 0.0)) throw DomainError("picard_local_solve: T_local must be positive");
    if (max_iter < 3) throw DomainError("picard_local_solve: max_iter must be >= 3");
    if (mesh_intervals < 1) throw DomainError("picard_local_solve: need at least one mesh interval");

    const Grid& grid = spec.grid;
    const std::size_t m = mesh_intervals;
    const double dt = t_local / static_cast<double>(m);
    const HartreeNonlinearity nonlinearity(grid, spec.kernel, spec.p, spec.q, spec.dealias);

    PicardResult result;
    result.within_theorem_scope = theorem_scope(spec);
    for (std::size_t j = 0; j <= m; ++j) result.times.push_back(dt * static_cast<double>(j));

    std::vector<double> symbol(grid.size());
    for (std::size_t k = 1; k < grid.size(); ++k) symbol[k] = std::pow(grid.frequency_norm(k), spec.beta);
    // decay[d][k] = exp(-d dt |xi_k|^beta) for mesh offsets d = 0..M.
    std::vector<std::vector<double>> decay(m + 1, std::vector<double>(grid.size()));
    for (std::size_t d = 0; d <= m; ++d)
        for (std::size_t k = 0; k < grid.size(); ++k) decay[d][k] = std::exp(-static_cast<double>(d) * dt * symbol[k]);

    const SpectralField u0_hat = forward_transform(sample_initial_data(spec.initial, grid));
    std::vector<SpectralField> free_flow(m + 1, SpectralField(grid));
    std::vector<Field> current;
    for (std::size_t j = 0; j <= m; ++j) {
        for (std::size_t k = 0; k < grid.size(); ++k) free_flow[j][k] = decay[j][k] * u0_hat[k];
        current.push_back(inverse_transform(free_flow[j]));
    }

    const double s = spec.lebesgue_index;
    double scale = 0.0;
    for (const auto& f : current) scale = std::max(scale, lp_norm(f, s) + sup_norm(f));

    std::size_t ratios_at_least_one = 0;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        std::vector<SpectralField> forcing;
        forcing.reserve(m + 1);
        for (const auto& f : current) forcing.push_back(nonlinearity.spectral(f));

        std::vector<Field> next;
        next.reserve(m + 1);
        for (std::size_t j = 0; j <= m; ++j) {
            SpectralField acc = free_flow[j];
            for (std::size_t i = 0; i <= j && j > 0; ++i) {
                const double w = (i == 0 || i == j) ? 0.5 * dt : dt;
                const auto& e = decay[j - i];
                const auto& f = forcing[i];
                for (std::size_t k = 0; k < grid.size(); ++k) acc[k] += w * e[k] * f[k];
            }
            next.push_back(inverse_transform(acc));
        }

        const double d = distance(next, current, s);
        result.distances.push_back(d);
        result.iterations = iter;
        current = std::move(next);
        for (const auto& f : current) scale = std::max(scale, lp_norm(f, s) + sup_norm(f));

        if (!std::isfinite(d)) {
            result.diverged = true;
            break;
        }
        if (d <= 1e-14 * scale) {
            result.fixed_point = true;
            break;
        }
        if (result.distances.size() >= 2) {
            const double r = d / result.distances[result.distances.size() - 2];
            result.ratios.push_back(r);
            ratios_at_least_one = r >= 1.0 ? ratios_at_least_one + 1 : 0;
            if (ratios_at_least_one >= 3) {
                result.diverged = true;
                break;
            }
        }
    }
    result.trajectory = std::move(current);
    return result;
}

}  // namespace hartree
