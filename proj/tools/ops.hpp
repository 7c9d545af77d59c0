#pragma once

// In-memory stages shared by the single-purpose commands and the pipeline.

#include <chrono>
#include <map>
#include <string>

#include "cli.hpp"
#include "lcs/acquisition.hpp"
#include "lcs/estimators.hpp"
#include "lcs/mask.hpp"
#include "lcs/metrics.hpp"
#include "lcs/sampler.hpp"

namespace lcs::cli {

json to_json(const CoilParams& p);
json to_json(const ScheduleParams& p);
json mask_json(const SamplingMask& m, double requested_R, std::uint64_t seed);
json image_json(const ComplexImage& img);

// 0.01 times the 99th-percentile magnitude of the noiseless kept samples.
double default_noise_sigma(const AcquisitionModel& model, const ComplexImage& x);

struct Reconstruction {
  std::string method;
  ComplexImage image;
  json info;
  // langevin only
  RealImage std;
  std::vector<ComplexImage> draws;
};

struct ReconOptions {
  CgSettings cg;
  WaveletSettings wavelet;
  ScheduleParams schedule;
  std::size_t chains = 1;
  std::uint64_t seed = 0;
  const Prior* prior = nullptr;
  double sigma = 0.0;  // used by langevin
  std::size_t threads = 1;
};

void check_method(const std::string& method);
Reconstruction reconstruct(const std::string& method, const AcquisitionModel& model, const KSpace& y,
                           const ReconOptions& opt);

// Writes the reconstruction and its companions next to `out`; returns the
// written paths.
std::vector<fs::path> write_reconstruction(const Reconstruction& r, const fs::path& out);

class Stopwatch {
 public:
  void lap(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    laps_[name] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  json to_json() const { return laps_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::map<std::string, double> laps_;
};

}  // namespace lcs::cli
