#include "lcs/wavelet.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lcs/error.hpp"

namespace lcs {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// One analysis/synthesis step on n contiguous-or-strided samples.
void haar_step(double* base, std::size_t n, std::size_t stride, bool forward, std::vector<double>& tmp) {
  tmp.resize(n);
  const std::size_t half = n / 2;
  if (forward) {
    for (std::size_t i = 0; i < half; ++i) {
      const double a = base[(2 * i) * stride];
      const double b = base[(2 * i + 1) * stride];
      tmp[i] = (a + b) * kInvSqrt2;
      tmp[half + i] = (a - b) * kInvSqrt2;
    }
  } else {
    for (std::size_t i = 0; i < half; ++i) {
      const double s = base[i * stride];
      const double d = base[(half + i) * stride];
      tmp[2 * i] = (s + d) * kInvSqrt2;
      tmp[2 * i + 1] = (s - d) * kInvSqrt2;
    }
  }
  for (std::size_t i = 0; i < n; ++i) base[i * stride] = tmp[i];
}

void check(std::span<double> data, std::size_t h, std::size_t w, std::size_t levels) {
  if (data.size() != h * w) throw DimensionMismatch("wavelet buffer size does not match shape");
  if (!haar_levels_valid(h, w, levels)) {
    throw InvalidArgument("2^levels must divide both image dimensions and levels must be >= 1");
  }
}

}  // namespace

bool haar_levels_valid(std::size_t height, std::size_t width, std::size_t levels) noexcept {
  if (levels == 0 || levels >= 63) return false;
  const std::size_t block = std::size_t{1} << levels;
  return height % block == 0 && width % block == 0;
}

void haar2_forward(std::span<double> data, std::size_t h, std::size_t w, std::size_t levels) {
  check(data, h, w, levels);
  std::vector<double> tmp;
  std::size_t rh = h, rw = w;
  for (std::size_t l = 0; l < levels; ++l) {
    for (std::size_t r = 0; r < rh; ++r) haar_step(&data[r * w], rw, 1, true, tmp);
    for (std::size_t c = 0; c < rw; ++c) haar_step(&data[c], rh, w, true, tmp);
    rh /= 2;
    rw /= 2;
  }
}

void haar2_inverse(std::span<double> data, std::size_t h, std::size_t w, std::size_t levels) {
  check(data, h, w, levels);
  std::vector<double> tmp;
  for (std::size_t l = levels; l-- > 0;) {
    const std::size_t rh = h >> l, rw = w >> l;
    for (std::size_t c = 0; c < rw; ++c) haar_step(&data[c], rh, w, false, tmp);
    for (std::size_t r = 0; r < rh; ++r) haar_step(&data[r * w], rw, 1, false, tmp);
  }
}

}  // namespace lcs
