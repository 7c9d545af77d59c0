#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lcs/mask.hpp"
#include "lcs/priors.hpp"
#include "lcs/signal.hpp"

namespace lcs {

struct CoilParams {
  std::size_t coils = 8;
  // All maps identically 1 (only meaningful for testing / single-coil setups).
  bool uniform = false;
  // Lobe centres sit on an ellipse at this fraction of the half field of view.
  double ring_radius = 0.7;
  // Gaussian lobe standard deviation as a fraction of max(height, width).
  double lobe_width = 0.45;
  // Linear phase ramp, radians across the field of view.
  double phase_slope = 1.0;
  // Upper bound on the per-pixel finite-difference magnitude of any map.
  double max_gradient = 0.25;
  std::uint64_t seed = 0;
};

struct CoilSensitivities {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<ComplexImage> maps;

  std::size_t coils() const noexcept { return maps.size(); }
  // sum_i |S_i(p)|^2 per pixel.
  RealImage energy() const;
  // Largest |S_i(p) - S_i(q)| over horizontally/vertically adjacent pixels.
  double max_gradient() const;

  static CoilSensitivities unit(std::size_t height, std::size_t width, std::size_t coils = 1);
};

CoilSensitivities simulate_coils(std::size_t height, std::size_t width, const CoilParams& params);

enum class PhantomKind { shepp_logan, gmm_sample };

PhantomKind parse_phantom_kind(std::string_view name);
std::string_view to_string(PhantomKind kind) noexcept;

struct PhantomParams {
  PhantomKind kind = PhantomKind::shepp_logan;
  std::size_t height = 64;
  std::size_t width = 64;
  std::uint64_t seed = 0;
  // Peak amplitude (radians) of a smooth random low-order phase; 0 gives a real image.
  double phase_amplitude = 0.0;
  // Required for gmm_sample; the draw is reshaped with from_channels.
  const GaussianMixturePrior* prior = nullptr;
};

ComplexImage make_phantom(const PhantomParams& params);

// The multi-coil measurement operator A: x -> {P F S_i x}_i, plus noise level.
struct AcquisitionModel {
  CoilSensitivities sens;
  SamplingMask mask;
  double noise_sigma = 0.0;  // total complex standard deviation per k-space sample

  std::size_t height() const noexcept { return sens.height; }
  std::size_t width() const noexcept { return sens.width; }
  std::size_t coils() const noexcept { return sens.coils(); }
  void validate() const;
};

KSpace forward(const AcquisitionModel& model, const ComplexImage& x);
ComplexImage adjoint(const AcquisitionModel& model, const KSpace& k);
// A^H A x without materialising the k-space object.
ComplexImage normal(const AcquisitionModel& model, const ComplexImage& x);
// forward(model, x) plus N_c(0, sigma^2) noise on kept locations, one RNG stream per coil.
KSpace acquire(const AcquisitionModel& model, const ComplexImage& x, std::uint64_t seed);

// Zeroes unobserved k-space entries.
void apply_mask(const SamplingMask& mask, KSpace& k);

}  // namespace lcs
