#include "lcs/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lcs/error.hpp"
#include "lcs/fft.hpp"
#include "lcs/rng.hpp"
#include "lcs/wavelet.hpp"

namespace lcs {
namespace {

// Real inner product on the stacked (Re, Im) representation.
double rdot(std::span<const cplx> a, std::span<const cplx> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return acc;
}

void axpy(double alpha, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

bool operator_is_zero(const AcquisitionModel& model) {
  if (model.mask.kept_count() == 0) return true;
  for (const auto& m : model.sens.maps) {
    for (const auto& v : m.values()) {
      if (v != cplx{}) return false;
    }
  }
  return true;
}

}  // namespace

ComplexImage zero_filled(const AcquisitionModel& model, const KSpace& k) { return adjoint(model, k); }

void CgSettings::validate() const {
  if (max_iters < 1) throw InvalidArgument("CG max_iters must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("CG tol must be > 0");
}

MvueResult mvue(const AcquisitionModel& model, const KSpace& y, const CgSettings& cg) {
  cg.validate();
  if (operator_is_zero(model)) throw SingularOperator("normal operator is zero (no sensitivity or samples)");

  const ComplexImage b = adjoint(model, y);
  const double ynorm2 = std::pow(norm2(y.values()), 2);
  const double bnorm = norm2(b.values());

  MvueResult res{ComplexImage(model.height(), model.width()), 0, false, {bnorm}, {std::sqrt(ynorm2)}};
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }

  ComplexImage& x = res.image;
  ComplexImage nx(model.height(), model.width());  // A^H A x, updated alongside x
  ComplexImage r = b;
  ComplexImage p = r;
  double rs = bnorm * bnorm;

  for (std::size_t it = 0; it < cg.max_iters; ++it) {
    const ComplexImage q = normal(model, p);
    const double pq = rdot(p.values(), q.values());
    if (!(pq > 0.0)) break;  // breakdown: p in the null space
    const double alpha = rs / pq;
    axpy(alpha, p.values(), x.values());
    axpy(alpha, q.values(), nx.values());
    axpy(-alpha, q.values(), r.values());
    const double rs_new = rdot(r.values(), r.values());
    res.iterations = it + 1;
    res.normal_residual.push_back(std::sqrt(rs_new));
    // ||y - Ax||^2 = ||y||^2 - 2 <x, A^H y> + <x, A^H A x>
    const double d2 = ynorm2 - 2.0 * rdot(x.values(), b.values()) + rdot(x.values(), nx.values());
    res.data_residual.push_back(std::sqrt(std::max(d2, 0.0)));
    if (std::sqrt(rs_new) <= cg.tol * bnorm) {
      res.converged = true;
      break;
    }
    const double beta = rs_new / rs;
    rs = rs_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
  }
  return res;
}

RealImage rss(const KSpace& k) {
  RealImage out(k.height(), k.width());
  for (std::size_t c = 0; c < k.coils(); ++c) {
    const ComplexImage coil = idft2(k.plane_image(c));
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += std::norm(coil[i]);
  }
  for (double& v : out.data) v = std::sqrt(v);
  return out;
}

// ---------------------------------------------------------------------------
// l1-wavelet ISTA

void WaveletSettings::validate(std::size_t height, std::size_t width) const {
  if (!haar_levels_valid(height, width, levels)) {
    throw InvalidArgument("wavelet levels must be >= 1 with 2^levels dividing both dimensions");
  }
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  if (!(step >= 0.0)) throw InvalidArgument("step must be >= 0");
  if (!(tol >= 0.0)) throw InvalidArgument("tol must be >= 0");
}

namespace {

void split(const ComplexImage& x, std::vector<double>& re, std::vector<double>& im) {
  re.resize(x.size());
  im.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
}

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

ComplexImage wavelet_shrink(const ComplexImage& x, std::size_t levels, double threshold) {
  const std::size_t h = x.height(), w = x.width();
  std::vector<double> re, im;
  split(x, re, im);
  haar2_forward(re, h, w, levels);
  haar2_forward(im, h, w, levels);
  for (auto& v : re) v = soft(v, threshold);
  for (auto& v : im) v = soft(v, threshold);
  haar2_inverse(re, h, w, levels);
  haar2_inverse(im, h, w, levels);
  ComplexImage out(h, w);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {re[i], im[i]};
  return out;
}

double wavelet_l1(const ComplexImage& x, std::size_t levels) {
  std::vector<double> re, im;
  split(x, re, im);
  haar2_forward(re, x.height(), x.width(), levels);
  haar2_forward(im, x.height(), x.width(), levels);
  double acc = 0.0;
  for (double v : re) acc += std::abs(v);
  for (double v : im) acc += std::abs(v);
  return acc;
}

double operator_norm_sq(const AcquisitionModel& model, std::size_t iters, std::uint64_t seed) {
  model.validate();
  Engine rng = make_engine(seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexImage v(model.height(), model.width());
  for (auto& z : v.values()) z = {gauss(rng), gauss(rng)};
  double lambda = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    const double n = norm2(v.values());
    if (n == 0.0) return 0.0;
    for (auto& z : v.values()) z /= n;
    ComplexImage u = normal(model, v);
    lambda = rdot(v.values(), u.values());
    v = std::move(u);
  }
  return lambda;
}

double l1_wavelet_objective(const AcquisitionModel& model, const KSpace& y, const ComplexImage& x,
                            const WaveletSettings& settings) {
  KSpace r = forward(model, x);
  for (std::size_t i = 0; i < r.size(); ++i) r.values()[i] -= y.values()[i];
  apply_mask(model.mask, r);
  const double data = norm2(r.values());
  return 0.5 * data * data + settings.lambda * wavelet_l1(x, settings.levels);
}

namespace {

// One proximal-gradient step; also returns the objective at `x` through `obj`.
ComplexImage ista_step(const AcquisitionModel& model, const KSpace& y, const ComplexImage& x,
                       const WaveletSettings& s, double step, double* obj) {
  KSpace r = forward(model, x);
  for (std::size_t i = 0; i < r.size(); ++i) r.values()[i] -= y.values()[i];
  apply_mask(model.mask, r);
  if (obj != nullptr) {
    const double data = norm2(r.values());
    *obj = 0.5 * data * data + s.lambda * wavelet_l1(x, s.levels);
  }
  const ComplexImage grad = adjoint(model, r);
  ComplexImage z = x;
  axpy(-step, grad.values(), z.values());
  return s.lambda > 0.0 ? wavelet_shrink(z, s.levels, step * s.lambda) : z;
}

}  // namespace

IstaResult l1_wavelet(const AcquisitionModel& model, const KSpace& y, const WaveletSettings& settings) {
  model.validate();
  settings.validate(model.height(), model.width());
  if (y.coils() != model.coils() || y.height() != model.height() || y.width() != model.width()) {
    throw DimensionMismatch("k-space shape does not match acquisition model");
  }
  IstaResult res;
  res.step = settings.step > 0.0 ? settings.step : 0.9 / operator_norm_sq(model);
  if (!std::isfinite(res.step)) throw SingularOperator("operator norm is zero");
  ComplexImage x(model.height(), model.width());
  double obj = 0.0;
  for (std::size_t it = 0; it < settings.iters; ++it) {
    ComplexImage next = ista_step(model, y, x, settings, res.step, &obj);
    if (!res.objective.empty() && obj > res.objective.back() * (1.0 + 1e-12) + 1e-300) {
      res.objective.push_back(obj);
      res.objective_increased = true;
      break;
    }
    res.objective.push_back(obj);
    double diff = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) diff += std::norm(next[i] - x[i]);
    const double xn = norm2(x.values());
    x = std::move(next);
    res.iterations = it + 1;
    if (settings.tol > 0.0 && std::sqrt(diff) <= settings.tol * xn) break;
  }
  if (!res.objective_increased) res.objective.push_back(l1_wavelet_objective(model, y, x, settings));
  res.image = std::move(x);
  return res;
}

double ista_stationarity(const AcquisitionModel& model, const KSpace& y, const ComplexImage& x,
                         const WaveletSettings& settings, double step) {
  const ComplexImage p = ista_step(model, y, x, settings, step, nullptr);
  double diff = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) diff += std::norm(p[i] - x[i]);
  return std::sqrt(diff) / std::max(norm2(x.values()), 1e-300);
}

// ---------------------------------------------------------------------------

double percentile_nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("percentile of an empty set");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("percentile fraction must lie in (0, 1]");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

Normalized normalize_99(const ComplexImage& x) {
  std::vector<double> mags(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mags[i] = std::abs(x[i]);
  const double scale = percentile_nearest_rank(std::move(mags), 0.99);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DegenerateScale("99th percentile magnitude is zero; cannot normalise");
  }
  Normalized out{x, scale};
  for (auto& v : out.image.values()) v /= scale;
  return out;
}

}  // namespace lcs
