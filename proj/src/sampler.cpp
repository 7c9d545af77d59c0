#include "lcs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lcs/error.hpp"
#include "lcs/parallel.hpp"
#include "lcs/rng.hpp"

namespace lcs {

void AnnealingSchedule::validate() const {
  if (betas.empty()) throw InvalidArgument("schedule has no steps");
  if (gammas.size() != betas.size() || etas.size() != betas.size()) {
    throw InvalidArgument("schedule sequences differ in length");
  }
  for (std::size_t t = 0; t < betas.size(); ++t) {
    if (!(betas[t] > 0.0) || !std::isfinite(betas[t])) throw InvalidArgument("betas must be positive");
    if (!(gammas[t] >= 0.0) || !std::isfinite(gammas[t])) throw InvalidArgument("gammas must be >= 0");
    if (!(etas[t] >= 0.0) || !std::isfinite(etas[t])) throw InvalidArgument("etas must be >= 0");
    if (t > 0 && betas[t] > betas[t - 1]) throw InvalidArgument("betas must be nonincreasing");
    if (t > 0 && gammas[t] > gammas[t - 1]) throw InvalidArgument("gammas must be nonincreasing");
  }
  if (gammas.back() > betas.back()) throw InvalidArgument("final gamma must not exceed final beta");
}

AnnealingSchedule make_schedule(const ScheduleParams& p) {
  if (!(p.beta_end > 0.0) || !(p.beta_begin > p.beta_end)) {
    throw InvalidArgument("need beta_begin > beta_end > 0");
  }
  if (p.levels < 1 || p.steps_per_level < 1) throw InvalidArgument("levels and steps_per_level must be >= 1");
  if (!(p.eta0 > 0.0)) throw InvalidArgument("eta0 must be positive");
  if (p.gamma_rule == GammaRule::equal_beta && !(p.gamma_scale >= 0.0 && p.gamma_scale <= 1.0)) {
    throw InvalidArgument("gamma_scale must lie in [0, 1]");
  }
  AnnealingSchedule s;
  const double ratio = p.beta_end / p.beta_begin;
  for (std::size_t l = 0; l < p.levels; ++l) {
    // A single level runs at the target smoothing level.
    const double beta = p.levels == 1
                            ? p.beta_end
                            : p.beta_begin * std::pow(ratio, static_cast<double>(l) /
                                                                 static_cast<double>(p.levels - 1));
    const double b = l + 1 == p.levels ? p.beta_end : beta;
    const double gamma = p.gamma_rule == GammaRule::equal_beta ? p.gamma_scale * b : 0.0;
    const double eta = p.eta0 * (b / p.beta_end) * (b / p.beta_end);
    for (std::size_t k = 0; k < p.steps_per_level; ++k) {
      s.betas.push_back(b);
      s.gammas.push_back(gamma);
      s.etas.push_back(eta);
    }
  }
  s.validate();
  return s;
}

bool likelihood_consistent(const AnnealingSchedule& schedule, double sigma) {
  if (!(sigma > 0.0) || schedule.gammas.empty()) return false;
  const double g = schedule.gammas.back();
  return g * g + sigma * sigma <= 2.0 * sigma * sigma;
}

namespace {

Vector complex_normal_channels(Eigen::Index n2, Engine& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Vector v(n2);
  for (Eigen::Index i = 0; i < n2; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace

ComplexImage langevin_initialization(std::size_t height, std::size_t width, std::uint64_t seed) {
  Engine rng(seed);
  return from_channels(complex_normal_channels(static_cast<Eigen::Index>(2 * height * width), rng), height,
                       width);
}

ComplexImage langevin_posterior(const AcquisitionModel& model, const KSpace& y, const Prior& prior,
                                const AnnealingSchedule& schedule, double sigma, std::uint64_t seed,
                                const LangevinOptions& options) {
  model.validate();
  schedule.validate();
  const std::size_t h = model.height(), w = model.width();
  if (y.coils() != model.coils() || y.height() != h || y.width() != w) {
    throw DimensionMismatch("k-space shape does not match acquisition model");
  }
  const auto n2 = static_cast<Eigen::Index>(2 * h * w);
  if (prior.dim() != n2) throw DimensionMismatch("prior dimension must equal 2 x pixels");
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be >= 0");

  Engine rng(seed);
  Vector x = complex_normal_channels(n2, rng);
  const double init_norm = std::max(x.norm(), 1e-300);
  const Vector aty = to_channels(adjoint(model, y));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector noise(n2);

  for (std::size_t t = 0; t < schedule.size(); ++t) {
    const double eta = schedule.etas[t];
    const double denom = schedule.gammas[t] * schedule.gammas[t] + sigma * sigma;
    if (!(denom > 0.0)) {
      throw SingularOperator("gamma_t^2 + sigma^2 is zero at step " + std::to_string(t));
    }
    const Vector data = aty - to_channels(normal(model, from_channels(x, h, w)));
    const Vector drift = prior.score(x, schedule.betas[t]) + data / denom;
    for (Eigen::Index i = 0; i < n2; ++i) noise[i] = gauss(rng);
    x += eta * drift + std::sqrt(2.0 * eta) * noise;

    const double n = x.norm();
    if (!std::isfinite(n) || n > options.divergence_factor * init_norm) {
      throw DivergenceError(t, options.chain_index,
                            "Langevin chain " + std::to_string(options.chain_index) + " diverged at step " +
                                std::to_string(t));
    }
  }
  return from_channels(x, h, w);
}

void ensemble_statistics(const std::vector<ComplexImage>& draws, ComplexImage& mean, RealImage& std) {
  if (draws.empty()) throw InvalidArgument("ensemble needs at least one draw");
  const std::size_t h = draws.front().height(), w = draws.front().width();
  for (const auto& d : draws) {
    if (!d.same_shape(draws.front())) throw DimensionMismatch("ensemble draws differ in shape");
  }
  const std::size_t k = draws.size();
  mean = ComplexImage(h, w);
  std = RealImage(h, w);
  std::vector<double> re(k), im(k), dev(k);
  auto sorted_sum = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  for (std::size_t p = 0; p < h * w; ++p) {
    for (std::size_t i = 0; i < k; ++i) {
      re[i] = draws[i][p].real();
      im[i] = draws[i][p].imag();
    }
    const cplx m{sorted_sum(re) / static_cast<double>(k), sorted_sum(im) / static_cast<double>(k)};
    mean[p] = m;
    for (std::size_t i = 0; i < k; ++i) dev[i] = std::norm(draws[i][p] - m);
    std.data[p] = std::sqrt(sorted_sum(dev) / static_cast<double>(k));
  }
}

std::uint64_t chain_seed(std::uint64_t seed, std::size_t k) { return derive_seed(seed, k); }

PosteriorSampleSet posterior_ensemble(const AcquisitionModel& model, const KSpace& y, const Prior& prior,
                                      const AnnealingSchedule& schedule, double sigma, std::size_t chains,
                                      std::uint64_t seed, std::size_t threads) {
  if (chains < 1) throw InvalidArgument("ensemble needs at least one chain");
  std::vector<std::uint64_t> seeds(chains);
  for (std::size_t k = 0; k < chains; ++k) seeds[k] = chain_seed(seed, k);
  return posterior_ensemble(model, y, prior, schedule, sigma, seeds, threads);
}

PosteriorSampleSet posterior_ensemble(const AcquisitionModel& model, const KSpace& y, const Prior& prior,
                                      const AnnealingSchedule& schedule, double sigma,
                                      const std::vector<std::uint64_t>& chain_seeds, std::size_t threads) {
  if (chain_seeds.empty()) throw InvalidArgument("ensemble needs at least one chain");
  PosteriorSampleSet out;
  out.seeds = chain_seeds;
  out.draws.resize(chain_seeds.size());
  parallel_for(chain_seeds.size(), threads, [&](std::size_t k) {
    LangevinOptions opts;
    opts.chain_index = k;
    out.draws[k] = langevin_posterior(model, y, prior, schedule, sigma, chain_seeds[k], opts);
  });
  ensemble_statistics(out.draws, out.mean, out.std);
  return out;
}

}  // namespace lcs
