#include "lcs/acquisition.hpp"

#include <cmath>
#include <random>

#include "lcs/error.hpp"
#include "lcs/fft.hpp"
#include "lcs/rng.hpp"

namespace lcs {

void AcquisitionModel::validate() const {
  if (sens.coils() == 0) throw InvalidArgument("acquisition model has no coils");
  if (mask.height != sens.height || mask.width != sens.width) {
    throw DimensionMismatch("mask and coil sensitivities differ in shape");
  }
  if (mask.kept.size() != mask.height * mask.width) throw DimensionMismatch("mask data size is wrong");
  for (const auto& m : sens.maps) {
    if (m.height() != sens.height || m.width() != sens.width) {
      throw DimensionMismatch("coil map shape disagrees with declared shape");
    }
  }
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
}

namespace {

void check_image(const AcquisitionModel& model, const ComplexImage& x) {
  model.validate();
  if (x.height() != model.height() || x.width() != model.width()) {
    throw DimensionMismatch("image shape does not match acquisition model");
  }
}

void check_kspace(const AcquisitionModel& model, const KSpace& k) {
  model.validate();
  if (k.coils() != model.coils() || k.height() != model.height() || k.width() != model.width()) {
    throw DimensionMismatch("k-space shape does not match acquisition model");
  }
}

}  // namespace

void apply_mask(const SamplingMask& mask, KSpace& k) {
  for (std::size_t c = 0; c < k.coils(); ++c) {
    auto p = k.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!mask.kept[i]) p[i] = 0.0;
    }
  }
}

KSpace forward(const AcquisitionModel& model, const ComplexImage& x) {
  check_image(model, x);
  const std::size_t h = model.height(), w = model.width();
  KSpace k(model.coils(), h, w);
  for (std::size_t c = 0; c < model.coils(); ++c) {
    auto p = k.plane(c);
    const auto& s = model.sens.maps[c];
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = s[i] * x[i];
    dft2_inplace(p, h, w);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!model.mask.kept[i]) p[i] = 0.0;
    }
  }
  return k;
}

ComplexImage adjoint(const AcquisitionModel& model, const KSpace& k) {
  check_kspace(model, k);
  const std::size_t h = model.height(), w = model.width();
  ComplexImage out(h, w);
  std::vector<cplx> buf(h * w);
  for (std::size_t c = 0; c < model.coils(); ++c) {
    auto p = k.plane(c);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = model.mask.kept[i] ? p[i] : cplx{};
    idft2_inplace(buf, h, w);
    const auto& s = model.sens.maps[c];
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] += std::conj(s[i]) * buf[i];
  }
  return out;
}

ComplexImage normal(const AcquisitionModel& model, const ComplexImage& x) {
  check_image(model, x);
  const std::size_t h = model.height(), w = model.width();
  ComplexImage out(h, w);
  std::vector<cplx> buf(h * w);
  for (std::size_t c = 0; c < model.coils(); ++c) {
    const auto& s = model.sens.maps[c];
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = s[i] * x[i];
    dft2_inplace(buf, h, w);
    for (std::size_t i = 0; i < buf.size(); ++i) {
      if (!model.mask.kept[i]) buf[i] = 0.0;
    }
    idft2_inplace(buf, h, w);
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] += std::conj(s[i]) * buf[i];
  }
  return out;
}

KSpace acquire(const AcquisitionModel& model, const ComplexImage& x, std::uint64_t seed) {
  KSpace k = forward(model, x);
  if (model.noise_sigma == 0.0) return k;
  const double sd = model.noise_sigma / std::sqrt(2.0);
  for (std::size_t c = 0; c < k.coils(); ++c) {
    Engine rng = make_engine(seed, c);
    std::normal_distribution<double> normal(0.0, sd);
    auto p = k.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!model.mask.kept[i]) continue;
      const double re = normal(rng);
      const double im = normal(rng);
      p[i] += cplx{re, im};
    }
  }
  return k;
}

}  // namespace lcs
