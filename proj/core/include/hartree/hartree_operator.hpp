#pragma once

#include <optional>

#include "hartree/grid.hpp"
#include "hartree/kernels.hpp"
#include "hartree/operators.hpp"

namespace hartree {

/**
 * Evaluates (K * |u|^p) |u|^q repeatedly on one grid. The convolution weights are
 * built once. With dealiasing on, the product is formed in physical space and
 * then truncated to |k| <= N/3 along each axis.
 */
class HartreeNonlinearity {
public:
    HartreeNonlinearity(const Grid& grid, const KernelSpec& kernel, double p, double q, bool dealias);

    [[nodiscard]] SpectralField spectral(const Field& u) const;
    [[nodiscard]] Field physical(const Field& u) const;
    /// True when K = constant(0), i.e. the equation is linear.
    [[nodiscard]] bool vanishes() const noexcept { return !convolver_.has_value(); }

private:
    Grid grid_;
    double p_;
    double q_;
    bool dealias_;
    std::optional<FreeSpaceConvolver> convolver_;
    std::vector<char> keep_;
};

}  // namespace hartree
