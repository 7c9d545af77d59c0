#include "lcs/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace lcs {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (shape, direction) under a lock and
// executed with fftw_execute_dft afterwards. FFTW_UNALIGNED lets a plan run on
// any std::vector buffer, and FFTW_ESTIMATE keeps the chosen algorithm
// independent of timing measurements.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t height, std::size_t width, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(height, width, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(height * width);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), buf, buf,
                                      sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// out[(i + n/2) % n] = in[i] along both axes when `forward`, the inverse
// permutation otherwise. Handles odd sizes.
void shift2(std::span<const cplx> in, std::span<cplx> out, std::size_t height, std::size_t width,
            bool forward) {
  const std::size_t sh = height / 2;
  const std::size_t sw = width / 2;
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (forward) {
        out[((r + sh) % height) * width + (c + sw) % width] = in[r * width + c];
      } else {
        out[r * width + c] = in[((r + sh) % height) * width + (c + sw) % width];
      }
    }
  }
}

void centered_transform(std::span<cplx> data, std::size_t height, std::size_t width, int sign) {
  if (data.empty()) return;
  std::vector<cplx> work(data.size());
  shift2(data, work, height, width, /*forward=*/false);
  auto* buf = reinterpret_cast<fftw_complex*>(work.data());
  fftw_execute_dft(plan_cache().get(height, width, sign), buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(height * width));
  for (auto& v : work) v *= scale;
  shift2(work, data, height, width, /*forward=*/true);
}

}  // namespace

void dft2_inplace(std::span<cplx> data, std::size_t height, std::size_t width) {
  centered_transform(data, height, width, FFTW_FORWARD);
}

void idft2_inplace(std::span<cplx> data, std::size_t height, std::size_t width) {
  centered_transform(data, height, width, FFTW_BACKWARD);
}

ComplexImage dft2(const ComplexImage& img) {
  ComplexImage out = img;
  dft2_inplace(out.values(), out.height(), out.width());
  return out;
}

ComplexImage idft2(const ComplexImage& ksp) {
  ComplexImage out = ksp;
  idft2_inplace(out.values(), out.height(), out.width());
  return out;
}

}  // namespace lcs
