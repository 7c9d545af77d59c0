#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lcs/acquisition.hpp"
#include "lcs/error.hpp"
#include "lcs/rng.hpp"

namespace lcs {
namespace {

struct Ellipse {
  double intensity, a, b, x0, y0, phi_deg;
};

// Modified Shepp-Logan (Toft) with contrast-enhanced intensities.
constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

ComplexImage shepp_logan(std::size_t h, std::size_t w) {
  ComplexImage img(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const double y = ((static_cast<double>(h) - 1.0) / 2.0 - static_cast<double>(r)) / (static_cast<double>(h) / 2.0);
    for (std::size_t c = 0; c < w; ++c) {
      const double x = (static_cast<double>(c) - (static_cast<double>(w) - 1.0) / 2.0) / (static_cast<double>(w) / 2.0);
      double v = 0.0;
      for (const auto& e : kSheppLogan) {
        const double t = e.phi_deg * std::numbers::pi / 180.0;
        const double xr = (x - e.x0) * std::cos(t) + (y - e.y0) * std::sin(t);
        const double yr = -(x - e.x0) * std::sin(t) + (y - e.y0) * std::cos(t);
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) v += e.intensity;
      }
      img(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

// Smooth phase: random combination of 1, x, y, xy, x^2, y^2 scaled to the amplitude.
void add_phase(ComplexImage& img, double amplitude, std::uint64_t seed) {
  Engine rng = make_engine(seed, 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<double, 6> coef{};
  for (auto& c : coef) c = u(rng);
  const double norm = std::abs(coef[0]) + std::abs(coef[1]) + std::abs(coef[2]) + std::abs(coef[3]) +
                      std::abs(coef[4]) + std::abs(coef[5]);
  const std::size_t h = img.height(), w = img.width();
  for (std::size_t r = 0; r < h; ++r) {
    const double y = h > 1 ? 2.0 * static_cast<double>(r) / static_cast<double>(h - 1) - 1.0 : 0.0;
    for (std::size_t c = 0; c < w; ++c) {
      const double x = w > 1 ? 2.0 * static_cast<double>(c) / static_cast<double>(w - 1) - 1.0 : 0.0;
      const double phase = amplitude / norm *
                           (coef[0] + coef[1] * x + coef[2] * y + coef[3] * x * y + coef[4] * x * x +
                            coef[5] * y * y);
      img(r, c) *= std::polar(1.0, phase);
    }
  }
}

}  // namespace

PhantomKind parse_phantom_kind(std::string_view name) {
  if (name == "shepp-logan") return PhantomKind::shepp_logan;
  if (name == "gmm-sample") return PhantomKind::gmm_sample;
  throw InvalidArgument("unknown phantom kind '" + std::string(name) + "'");
}

std::string_view to_string(PhantomKind kind) noexcept {
  return kind == PhantomKind::shepp_logan ? "shepp-logan" : "gmm-sample";
}

ComplexImage make_phantom(const PhantomParams& p) {
  if (p.height == 0 || p.width == 0) throw InvalidArgument("phantom dimensions must be positive");
  ComplexImage img;
  switch (p.kind) {
    case PhantomKind::shepp_logan:
      img = shepp_logan(p.height, p.width);
      break;
    case PhantomKind::gmm_sample: {
      if (p.prior == nullptr) throw InvalidArgument("gmm-sample phantom requires a mixture prior");
      if (p.prior->dim() != static_cast<Eigen::Index>(2 * p.height * p.width)) {
        throw DimensionMismatch("mixture prior dimension does not match 2 x height x width");
      }
      Engine rng = make_engine(p.seed, 0);
      img = from_channels(p.prior->sample(rng), p.height, p.width);
      break;
    }
  }
  if (p.phase_amplitude != 0.0) add_phase(img, p.phase_amplitude, p.seed);
  return img;
}

}  // namespace lcs
