#include "hartree/hartree_operator.hpp"

#include <cmath>
#include <cstdlib>

namespace hartree {

HartreeNonlinearity::HartreeNonlinearity(const Grid& grid, const KernelSpec& kernel, double p, double q, bool dealias)
    : grid_(grid), p_(p), q_(q), dealias_(dealias) {
    kernel.validate(grid.dim());
    const auto* c = std::get_if<ConstantKernel>(&kernel.family);
    if (c == nullptr || c->value != 0.0) convolver_.emplace(grid, kernel);

    keep_.assign(grid.size(), 1);
    const long limit = static_cast<long>(grid.points_per_axis() / 3);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto [i, j] = grid.unflatten(k);
        const bool high = std::labs(grid.wavenumber(i)) > limit || (grid.dim() == 2 && std::labs(grid.wavenumber(j)) > limit);
        if (high) keep_[k] = 0;
    }
}

Field HartreeNonlinearity::physical(const Field& u) const {
    if (!convolver_) return Field(grid_);
    Field density(grid_);
    for (std::size_t i = 0; i < u.size(); ++i) density[i] = std::pow(std::abs(u[i]), p_);
    Field out = convolver_->apply(density);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] *= std::pow(std::abs(u[i]), q_);
    return out;
}

SpectralField HartreeNonlinearity::spectral(const Field& u) const {
    if (!convolver_) return SpectralField(grid_);
    SpectralField out = forward_transform(physical(u));
    if (dealias_) {
        for (std::size_t k = 0; k < out.size(); ++k)
            if (!keep_[k]) out[k] = cplx{0.0, 0.0};
    }
    return out;
}

}  // namespace hartree
