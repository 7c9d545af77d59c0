#pragma once

#include <span>

#include "lcs/signal.hpp"

namespace lcs {

// Centered, unitary 2-D DFT: DC sits at (height/2, width/2) and the transform
// preserves the l2 norm. Any grid size is accepted.
ComplexImage dft2(const ComplexImage& img);
ComplexImage idft2(const ComplexImage& ksp);

// In-place versions on a row-major height x width buffer.
void dft2_inplace(std::span<cplx> data, std::size_t height, std::size_t width);
void idft2_inplace(std::span<cplx> data, std::size_t height, std::size_t width);

}  // namespace lcs
