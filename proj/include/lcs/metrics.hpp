#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcs/signal.hpp"

namespace lcs {

// All metrics compare magnitude images.
RealImage magnitude(const ComplexImage& x);

// 20 log10(max|ref| / RMSE). +inf when the magnitudes agree exactly.
double psnr(const RealImage& ref, const RealImage& rec);
double psnr(const ComplexImage& ref, const ComplexImage& rec);

struct SsimParams {
  std::size_t window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  std::optional<double> data_range;  // default max|ref|
};

// Mean local SSIM over all fully contained windows.
double ssim(const RealImage& ref, const RealImage& rec, const SsimParams& p = {});
double ssim(const ComplexImage& ref, const ComplexImage& rec, const SsimParams& p = {});

inline constexpr double kDefaultMaskThreshold = 0.05;

struct MaskedMetrics {
  double psnr = 0.0;
  double ssim = 0.0;
  std::size_t masked_pixels = 0;
};

// Zeros both magnitudes where |ref| < threshold * max|ref|, then evaluates.
MaskedMetrics masked_metrics(const ComplexImage& ref, const ComplexImage& rec,
                             double threshold = kDefaultMaskThreshold, const SsimParams& p = {});

struct Aggregate {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;         // sample standard deviation
  double half_width = 0.0;  // z * std / sqrt(n)
  double lower = 0.0;
  double upper = 0.0;
  double confidence = 0.95;
};

// Normal-approximation confidence interval for the mean.
Aggregate aggregate(const std::vector<double>& values, double confidence = 0.95);

struct MetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double masked_psnr = 0.0;
  double masked_ssim = 0.0;
  double data_range = 0.0;
  double threshold = kDefaultMaskThreshold;
};

MetricReport evaluate(const ComplexImage& ref, const ComplexImage& rec, double threshold = kDefaultMaskThreshold);

// Infinite PSNR is written as null with an "<name>_infinite" flag.
nlohmann::json to_json(const MetricReport& r);
nlohmann::json to_json(const Aggregate& a);

struct NamedReport {
  std::string name;
  MetricReport report;
};
void write_csv(std::ostream& os, const std::vector<NamedReport>& rows);

}  // namespace lcs
