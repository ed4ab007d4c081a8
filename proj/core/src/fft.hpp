#pragma once

#include <cstddef>
#include <span>

#include "hartree/grid.hpp"

namespace hartree::detail {

enum class FftDirection { forward, backward };

/// Unnormalized complex DFT over a dim-dimensional cube with n points per axis.
/// `in` and `out` must not alias. Forward uses exp(-2 pi i k j / n).
void dft(std::span<const cplx> in, std::span<cplx> out, int dim, std::size_t n, FftDirection dir);

}  // namespace hartree::detail
