#include "lcs/signal.hpp"

#include <cmath>
#include <string>

#include "lcs/error.hpp"

namespace lcs {

ComplexImage::ComplexImage(std::size_t height, std::size_t width, cplx fill)
    : height_(height), width_(width), data_(height * width, fill) {}

ComplexImage::ComplexImage(std::size_t height, std::size_t width, std::vector<cplx> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (data_.size() != height_ * width_) {
    throw DimensionMismatch("image data has " + std::to_string(data_.size()) +
                            " samples, expected " + std::to_string(height_ * width_));
  }
}

bool ComplexImage::all_finite() const noexcept {
  for (const cplx& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

KSpace::KSpace(std::size_t coils, std::size_t height, std::size_t width)
    : coils_(coils), height_(height), width_(width), data_(coils * height * width) {}

KSpace::KSpace(std::size_t coils, std::size_t height, std::size_t width, std::vector<cplx> data)
    : coils_(coils), height_(height), width_(width), data_(std::move(data)) {
  if (data_.size() != coils_ * height_ * width_) {
    throw DimensionMismatch("k-space data has " + std::to_string(data_.size()) +
                            " samples, expected " + std::to_string(coils_ * height_ * width_));
  }
}

ComplexImage KSpace::plane_image(std::size_t coil) const {
  auto p = plane(coil);
  return ComplexImage(height_, width_, std::vector<cplx>(p.begin(), p.end()));
}

void KSpace::set_plane(std::size_t coil, const ComplexImage& img) {
  if (img.height() != height_ || img.width() != width_) {
    throw DimensionMismatch("coil plane shape does not match k-space");
  }
  auto p = plane(coil);
  std::copy(img.values().begin(), img.values().end(), p.begin());
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionMismatch("inner product of unequal lengths");
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm2(std::span<const cplx> a) {
  double acc = 0.0;
  for (const cplx& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

Eigen::VectorXd to_channels(const ComplexImage& img) {
  const auto n = static_cast<Eigen::Index>(img.size());
  Eigen::VectorXd v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = img[static_cast<std::size_t>(i)].real();
    v[n + i] = img[static_cast<std::size_t>(i)].imag();
  }
  return v;
}

ComplexImage from_channels(const Eigen::VectorXd& v, std::size_t height, std::size_t width) {
  const auto n = static_cast<Eigen::Index>(height * width);
  if (v.size() != 2 * n) throw DimensionMismatch("channel vector length does not match image shape");
  ComplexImage img(height, width);
  for (Eigen::Index i = 0; i < n; ++i) img[static_cast<std::size_t>(i)] = {v[i], v[n + i]};
  return img;
}

}  // namespace lcs
