#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lcs/acquisition.hpp"
#include "lcs/error.hpp"
#include "lcs/rng.hpp"

namespace lcs {

RealImage CoilSensitivities::energy() const {
  RealImage e(height, width);
  for (const auto& m : maps) {
    for (std::size_t p = 0; p < e.data.size(); ++p) e.data[p] += std::norm(m[p]);
  }
  return e;
}

double CoilSensitivities::max_gradient() const {
  double g = 0.0;
  for (const auto& m : maps) {
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        if (c + 1 < width) g = std::max(g, std::abs(m(r, c + 1) - m(r, c)));
        if (r + 1 < height) g = std::max(g, std::abs(m(r + 1, c) - m(r, c)));
      }
    }
  }
  return g;
}

CoilSensitivities CoilSensitivities::unit(std::size_t height, std::size_t width, std::size_t coils) {
  CoilSensitivities s{height, width, {}};
  for (std::size_t i = 0; i < coils; ++i) s.maps.emplace_back(height, width, cplx{1.0, 0.0});
  return s;
}

CoilSensitivities simulate_coils(std::size_t height, std::size_t width, const CoilParams& params) {
  if (params.coils == 0) throw InvalidArgument("need at least one coil");
  if (height == 0 || width == 0) throw InvalidArgument("coil map dimensions must be positive");
  if (params.uniform) return CoilSensitivities::unit(height, width, params.coils);
  if (!(params.lobe_width > 0.0)) throw InvalidArgument("lobe_width must be positive");

  CoilSensitivities s{height, width, {}};
  const double cy = static_cast<double>(height - 1) / 2.0;
  const double cx = static_cast<double>(width - 1) / 2.0;
  const double fov = static_cast<double>(std::max(height, width));
  const double sd = params.lobe_width * fov;
  const std::size_t n = params.coils;

  for (std::size_t i = 0; i < n; ++i) {
    Engine rng = make_engine(params.seed, i);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double jitter = 0.25 * unit(rng) * std::numbers::pi / static_cast<double>(n);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) + jitter;
    const double phase0 = std::numbers::pi * unit(rng);
    // A single coil sits at the centre; otherwise lobes ring the field of view.
    const double ring = n == 1 ? 0.0 : params.ring_radius;
    const double py = cy + ring * (static_cast<double>(height) / 2.0) * std::sin(angle);
    const double px = cx + ring * (static_cast<double>(width) / 2.0) * std::cos(angle);
    // Phase ramps along the direction of the lobe centre.
    const double ky = params.phase_slope / fov * std::sin(angle);
    const double kx = params.phase_slope / fov * std::cos(angle);

    ComplexImage map(height, width);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double dy = static_cast<double>(r) - py;
        const double dx = static_cast<double>(c) - px;
        const double mag = std::exp(-(dx * dx + dy * dy) / (2.0 * sd * sd));
        const double ph = phase0 + ky * (static_cast<double>(r) - cy) + kx * (static_cast<double>(c) - cx);
        map(r, c) = std::polar(mag, ph);
      }
    }
    s.maps.push_back(std::move(map));
  }

  // Scale so the peak combined sensitivity is 1.
  const RealImage e = s.energy();
  double peak = 0.0;
  for (double v : e.data) peak = std::max(peak, v);
  const double scale = 1.0 / std::sqrt(peak);
  for (auto& m : s.maps) {
    for (auto& v : m.values()) v *= scale;
  }
  if (s.max_gradient() > params.max_gradient) {
    throw InvalidArgument("coil parameters give maps rougher than max_gradient = " +
                          std::to_string(params.max_gradient));
  }
  return s;
}

}  // namespace lcs
