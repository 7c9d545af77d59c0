#pragma once

#include <cstddef>
#include <span>

namespace lcs {

// Orthonormal multi-level 2-D Haar transform of a real row-major array, in
// place. Coefficients use the usual Mallat layout (coarse approximation in the
// top-left corner). 2^levels must divide both dimensions.
void haar2_forward(std::span<double> data, std::size_t height, std::size_t width, std::size_t levels);
void haar2_inverse(std::span<double> data, std::size_t height, std::size_t width, std::size_t levels);

bool haar_levels_valid(std::size_t height, std::size_t width, std::size_t levels) noexcept;

}  // namespace lcs
