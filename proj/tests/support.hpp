#pragma once

// Shared helpers for the unit and acceptance tests: random instances and
// independent reference implementations.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "lcs/acquisition.hpp"
#include "lcs/mask.hpp"
#include "lcs/rng.hpp"
#include "lcs/signal.hpp"

namespace lcs::test {

inline ComplexImage random_image(std::size_t h, std::size_t w, Engine& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexImage x(h, w);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {g(rng), g(rng)};
  return x;
}

inline KSpace random_kspace(std::size_t coils, std::size_t h, std::size_t w, Engine& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  KSpace k(coils, h, w);
  for (auto& v : k.values()) v = {g(rng), g(rng)};
  return k;
}

// Random S_i with Gaussian entries (not smooth); fine for algebraic identities.
inline CoilSensitivities random_maps(std::size_t coils, std::size_t h, std::size_t w, Engine& rng) {
  CoilSensitivities s;
  s.height = h;
  s.width = w;
  for (std::size_t c = 0; c < coils; ++c) s.maps.push_back(random_image(h, w, rng));
  return s;
}

inline SamplingMask random_mask(std::size_t h, std::size_t w, double keep, Engine& rng) {
  SamplingMask m = SamplingMask::full(h, w);
  std::bernoulli_distribution b(keep);
  for (auto& v : m.kept) v = b(rng) ? 1 : 0;
  m.kept[0] = 1;
  return m;
}

// Centered unitary DFT by direct summation:
// X[k, l] = N^{-1/2} sum x[n, m] exp(-2 pi i ((k-ch)(n-ch)/H + (l-cw)(m-cw)/W)).
inline ComplexImage naive_dft2(const ComplexImage& x, int sign = -1) {
  const std::size_t h = x.height(), w = x.width();
  const double ch = static_cast<double>(h / 2), cw = static_cast<double>(w / 2);
  ComplexImage out(h, w);
  const double norm = 1.0 / std::sqrt(static_cast<double>(h * w));
  for (std::size_t k = 0; k < h; ++k) {
    for (std::size_t l = 0; l < w; ++l) {
      std::complex<long double> acc = 0;
      for (std::size_t n = 0; n < h; ++n) {
        for (std::size_t m = 0; m < w; ++m) {
          const long double ph =
              sign * 2.0L * std::numbers::pi_v<long double> *
              ((static_cast<long double>(k) - ch) * (static_cast<long double>(n) - ch) / h +
               (static_cast<long double>(l) - cw) * (static_cast<long double>(m) - cw) / w);
          acc += std::complex<long double>(x(n, m).real(), x(n, m).imag()) *
                 std::complex<long double>(std::cos(ph), std::sin(ph));
        }
      }
      out(k, l) = {static_cast<double>(acc.real() * norm), static_cast<double>(acc.imag() * norm)};
    }
  }
  return out;
}

inline double rel_diff(const ComplexImage& a, const ComplexImage& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

inline double kspace_inner_re(const KSpace& a, const KSpace& b) { return inner(a.values(), b.values()).real(); }

}  // namespace lcs::test
