#include "lcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "lcs/error.hpp"

namespace lcs {
namespace {

void check_shapes(const RealImage& a, const RealImage& b) {
  if (a.height != b.height || a.width != b.width) throw DimensionMismatch("metric inputs differ in shape");
  if (a.data.empty()) throw InvalidArgument("metric inputs are empty");
}

double max_of(const RealImage& x) { return *std::max_element(x.data.begin(), x.data.end()); }

std::vector<double> gaussian_window(std::size_t n, double sigma) {
  std::vector<double> g(n);
  const double c = (static_cast<double>(n) - 1.0) / 2.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - c;
    g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    s += g[i];
  }
  for (double& v : g) v /= s;
  return g;
}

// Separable weighted sums over every valid window position.
RealImage filter_valid(const RealImage& x, const std::vector<double>& g) {
  const std::size_t n = g.size(), oh = x.height - n + 1, ow = x.width - n + 1;
  RealImage rows(x.height, ow);
  for (std::size_t r = 0; r < x.height; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g[k] * x(r, c + k);
      rows(r, c) = s;
    }
  }
  RealImage out(oh, ow);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g[k] * rows(r + k, c);
      out(r, c) = s;
    }
  }
  return out;
}

RealImage product(const RealImage& a, const RealImage& b) {
  RealImage out(a.height, a.width);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] * b.data[i];
  return out;
}

}  // namespace

RealImage magnitude(const ComplexImage& x) {
  RealImage out(x.height(), x.width());
  for (std::size_t i = 0; i < x.size(); ++i) out.data[i] = std::abs(x[i]);
  return out;
}

double psnr(const RealImage& ref, const RealImage& rec) {
  check_shapes(ref, rec);
  const double peak = max_of(ref);
  if (!(peak > 0.0)) throw InvalidArgument("PSNR of a zero reference is undefined");
  double se = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i) {
    const double d = ref.data[i] - rec.data[i];
    se += d * d;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  const double rmse = std::sqrt(se / static_cast<double>(ref.data.size()));
  return 20.0 * std::log10(peak / rmse);
}

double psnr(const ComplexImage& ref, const ComplexImage& rec) { return psnr(magnitude(ref), magnitude(rec)); }

double ssim(const RealImage& ref, const RealImage& rec, const SsimParams& p) {
  check_shapes(ref, rec);
  if (p.window == 0 || ref.height < p.window || ref.width < p.window) {
    throw InvalidArgument("image smaller than the SSIM window");
  }
  const double range = p.data_range ? *p.data_range : max_of(ref);
  if (!(range > 0.0)) throw InvalidArgument("SSIM data range must be positive");
  const double c1 = (p.k1 * range) * (p.k1 * range);
  const double c2 = (p.k2 * range) * (p.k2 * range);
  const auto g = gaussian_window(p.window, p.sigma);

  const RealImage mx = filter_valid(ref, g), my = filter_valid(rec, g);
  const RealImage xx = filter_valid(product(ref, ref), g);
  const RealImage yy = filter_valid(product(rec, rec), g);
  const RealImage xy = filter_valid(product(ref, rec), g);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.data.size(); ++i) {
    const double ux = mx.data[i], uy = my.data[i];
    const double vx = xx.data[i] - ux * ux, vy = yy.data[i] - uy * uy, cxy = xy.data[i] - ux * uy;
    const double num = (2.0 * ux * uy + c1) * (2.0 * cxy + c2);
    const double den = (ux * ux + uy * uy + c1) * (vx + vy + c2);
    total += num / den;
  }
  return total / static_cast<double>(mx.data.size());
}

double ssim(const ComplexImage& ref, const ComplexImage& rec, const SsimParams& p) {
  return ssim(magnitude(ref), magnitude(rec), p);
}

MaskedMetrics masked_metrics(const ComplexImage& ref, const ComplexImage& rec, double threshold,
                             const SsimParams& p) {
  if (!ref.same_shape(rec)) throw DimensionMismatch("metric inputs differ in shape");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("mask threshold must lie in [0, 1]");
  RealImage a = magnitude(ref), b = magnitude(rec);
  if (a.data.empty()) throw InvalidArgument("metric inputs are empty");
  const double cut = threshold * max_of(a);
  MaskedMetrics out;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (a.data[i] < cut) {
      a.data[i] = 0.0;
      b.data[i] = 0.0;
      ++out.masked_pixels;
    }
  }
  out.psnr = psnr(a, b);
  out.ssim = ssim(a, b, p);
  return out;
}

Aggregate aggregate(const std::vector<double>& values, double confidence) {
  if (values.empty()) throw InvalidArgument("cannot aggregate an empty set");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  Aggregate a;
  a.n = values.size();
  a.confidence = confidence;
  double s = 0.0;
  for (double v : values) s += v;
  a.mean = s / static_cast<double>(a.n);
  if (a.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(a.n - 1));
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
    a.half_width = z * a.std / std::sqrt(static_cast<double>(a.n));
  }
  a.lower = a.mean - a.half_width;
  a.upper = a.mean + a.half_width;
  return a;
}

MetricReport evaluate(const ComplexImage& ref, const ComplexImage& rec, double threshold) {
  MetricReport r;
  const RealImage a = magnitude(ref), b = magnitude(rec);
  r.psnr = psnr(a, b);
  r.ssim = ssim(a, b);
  const MaskedMetrics m = masked_metrics(ref, rec, threshold);
  r.masked_psnr = m.psnr;
  r.masked_ssim = m.ssim;
  r.data_range = max_of(a);
  r.threshold = threshold;
  return r;
}

namespace {

void put_db(nlohmann::json& j, const std::string& key, double v) {
  if (std::isinf(v)) {
    j[key] = nullptr;
    j[key + "_infinite"] = true;
  } else {
    j[key] = v;
  }
}

std::string db_text(double v) {
  if (std::isinf(v)) return "inf";
  nlohmann::json j = v;
  return j.dump();
}

}  // namespace

nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json j;
  put_db(j, "psnr", r.psnr);
  j["ssim"] = r.ssim;
  put_db(j, "masked_psnr", r.masked_psnr);
  j["masked_ssim"] = r.masked_ssim;
  j["data_range"] = r.data_range;
  j["mask_threshold"] = r.threshold;
  return j;
}

nlohmann::json to_json(const Aggregate& a) {
  return {{"n", a.n},
          {"mean", a.mean},
          {"std", a.std},
          {"confidence", a.confidence},
          {"half_width", a.half_width},
          {"lower", a.lower},
          {"upper", a.upper}};
}

void write_csv(std::ostream& os, const std::vector<NamedReport>& rows) {
  os << "name,psnr,ssim,masked_psnr,masked_ssim,data_range\n";
  for (const auto& r : rows) {
    os << r.name << ',' << db_text(r.report.psnr) << ',' << nlohmann::json(r.report.ssim).dump() << ','
       << db_text(r.report.masked_psnr) << ',' << nlohmann::json(r.report.masked_ssim).dump() << ','
       << nlohmann::json(r.report.data_range).dump() << '\n';
  }
}

}  // namespace lcs
