#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace lcs {

using cplx = std::complex<double>;

// Row-major complex image. Ground truth, reconstructions and coil images all
// use this container.
class ComplexImage {
 public:
  ComplexImage() = default;
  ComplexImage(std::size_t height, std::size_t width, cplx fill = {});
  ComplexImage(std::size_t height, std::size_t width, std::vector<cplx> data);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const ComplexImage& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  cplx& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  std::span<cplx> values() noexcept { return data_; }
  std::span<const cplx> values() const noexcept { return data_; }
  const std::vector<cplx>& vector() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const ComplexImage&, const ComplexImage&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<cplx> data_;
};

// Nonnegative real image (RSS combinations, pixel-wise standard deviations).
struct RealImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  RealImage() = default;
  RealImage(std::size_t h, std::size_t w, double fill = 0.0) : height(h), width(w), data(h * w, fill) {}

  double& operator()(std::size_t row, std::size_t col) { return data[row * width + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data[row * width + col]; }

  friend bool operator==(const RealImage&, const RealImage&) = default;
};

// Multi-coil k-space on the full Cartesian grid; unobserved locations hold zero.
class KSpace {
 public:
  KSpace() = default;
  KSpace(std::size_t coils, std::size_t height, std::size_t width);
  KSpace(std::size_t coils, std::size_t height, std::size_t width, std::vector<cplx> data);

  std::size_t coils() const noexcept { return coils_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<cplx> plane(std::size_t coil) { return {data_.data() + coil * plane_size(), plane_size()}; }
  std::span<const cplx> plane(std::size_t coil) const {
    return {data_.data() + coil * plane_size(), plane_size()};
  }
  ComplexImage plane_image(std::size_t coil) const;
  void set_plane(std::size_t coil, const ComplexImage& img);

  std::span<cplx> values() noexcept { return data_; }
  std::span<const cplx> values() const noexcept { return data_; }

  friend bool operator==(const KSpace&, const KSpace&) = default;

 private:
  std::size_t coils_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<cplx> data_;
};

// <a, b> = sum conj(a_i) b_i
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> a);

// Real and imaginary parts as two image channels: [Re(x_0..x_{N-1}), Im(x_0..x_{N-1})].
Eigen::VectorXd to_channels(const ComplexImage& img);
ComplexImage from_channels(const Eigen::VectorXd& v, std::size_t height, std::size_t width);

}  // namespace lcs
