#pragma once

#include <cstddef>

#include "ttlr/tensor.hpp"

namespace ttlr::detail {

enum class FftDirection { forward, backward };

/// Unnormalized in-place DFT of a contiguous length-n buffer.
/// forward uses exp(-2*pi*i*k*n/N), backward exp(+2*pi*i*k*n/N).
void dft_1d(cplx* buf, std::size_t n, FftDirection dir);

/// Unnormalized in-place 2D DFT of a contiguous row-major rows x cols buffer.
void dft_2d(cplx* buf, std::size_t rows, std::size_t cols, FftDirection dir);

}  // namespace ttlr::detail
