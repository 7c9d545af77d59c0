#pragma once

#include <cstdint>
#include <vector>

#include "lcs/acquisition.hpp"
#include "lcs/priors.hpp"
#include "lcs/signal.hpp"

namespace lcs {

// One (beta_t, gamma_t, eta_t) triple per Langevin step.
struct AnnealingSchedule {
  std::vector<double> betas;   // prior smoothing levels, positive and nonincreasing
  std::vector<double> gammas;  // likelihood annealing, nonnegative and nonincreasing
  std::vector<double> etas;    // step sizes, nonnegative

  std::size_t size() const noexcept { return betas.size(); }
  void validate() const;
};

enum class GammaRule {
  equal_beta,  // gamma_t = scale * beta_t
  zero,        // gamma_t = 0
};

struct ScheduleParams {
  double beta_begin = 232.0;
  double beta_end = 0.0066;
  std::size_t levels = 100;
  std::size_t steps_per_level = 3;
  double eta0 = 2e-5;  // step size at the final level
  GammaRule gamma_rule = GammaRule::equal_beta;
  double gamma_scale = 1.0;
};

// Geometric levels from beta_begin to beta_end, each repeated steps_per_level
// times, with eta_t = eta0 * (beta_t / beta_end)^2.
AnnealingSchedule make_schedule(const ScheduleParams& params);

// gamma_{T-1}^2 + sigma^2 <= 2 sigma^2, i.e. the last updates use (nearly) the
// true likelihood. Always false for sigma == 0.
bool likelihood_consistent(const AnnealingSchedule& schedule, double sigma);

// x_0 ~ N_c(0, I) as used by the chain seeded with `seed`.
ComplexImage langevin_initialization(std::size_t height, std::size_t width, std::uint64_t seed);

struct LangevinOptions {
  // Abort when ||x_t|| exceeds this multiple of ||x_0||.
  double divergence_factor = 1e6;
  // Index reported in DivergenceError.
  std::size_t chain_index = 0;
};

// Annealed Langevin dynamics on the real/imaginary channels:
//   x <- x + eta_t (f(x; beta_t) + A^H (y - A x) / (gamma_t^2 + sigma^2)) + sqrt(2 eta_t) z_t.
ComplexImage langevin_posterior(const AcquisitionModel& model, const KSpace& y, const Prior& prior,
                                const AnnealingSchedule& schedule, double sigma, std::uint64_t seed,
                                const LangevinOptions& options = {});

struct PosteriorSampleSet {
  std::vector<ComplexImage> draws;
  ComplexImage mean;
  RealImage std;  // sqrt(sum_i |x_i - mean|^2 / K)
  std::vector<std::uint64_t> seeds;
};

// Pixel-wise mean and standard deviation. Sums run over sorted values so the
// result does not depend on the order of `draws`.
void ensemble_statistics(const std::vector<ComplexImage>& draws, ComplexImage& mean, RealImage& std);

// Seed of chain `k` in an ensemble seeded with `seed`.
std::uint64_t chain_seed(std::uint64_t seed, std::size_t k);

PosteriorSampleSet posterior_ensemble(const AcquisitionModel& model, const KSpace& y, const Prior& prior,
                                      const AnnealingSchedule& schedule, double sigma, std::size_t chains,
                                      std::uint64_t seed, std::size_t threads = 1);

PosteriorSampleSet posterior_ensemble(const AcquisitionModel& model, const KSpace& y, const Prior& prior,
                                      const AnnealingSchedule& schedule, double sigma,
                                      const std::vector<std::uint64_t>& chain_seeds, std::size_t threads = 1);

}  // namespace lcs
