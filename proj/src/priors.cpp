#include "lcs/priors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "lcs/error.hpp"

namespace lcs {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

Vector standard_normal(Eigen::Index n, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

Vector smoothed_diagonal(const Vector& variance, double beta) {
  if (!(beta >= 0.0)) throw InvalidArgument("smoothing level beta must be >= 0");
  Vector d = variance.array() + beta * beta;
  if ((d.array() <= 0.0).any()) {
    throw SingularOperator("smoothed covariance is singular (zero variance with beta = 0)");
  }
  return d;
}

void check_dim(const Vector& x, Eigen::Index d) {
  if (x.size() != d) {
    throw DimensionMismatch("vector of length " + std::to_string(x.size()) +
                            " passed to prior of dimension " + std::to_string(d));
  }
}

}  // namespace

double log_sum_exp(const Vector& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

std::size_t sample_categorical(const std::vector<double>& probs, Engine& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

// ---------------------------------------------------------------------------
// Gaussian

GaussianPrior::GaussianPrior(Vector mean, Vector variance, Matrix factor)
    : mean_(std::move(mean)), variance_(std::move(variance)), factor_(std::move(factor)) {
  if (mean_.size() == 0) throw InvalidArgument("Gaussian prior needs a nonempty mean");
  if (variance_.size() != mean_.size()) throw DimensionMismatch("variance length differs from mean");
  if ((variance_.array() < 0.0).any()) throw InvalidArgument("variances must be nonnegative");
  if (factor_.size() == 0) factor_ = Matrix(mean_.size(), 0);
  if (factor_.rows() != mean_.size()) throw DimensionMismatch("low-rank factor has wrong row count");
}

GaussianPrior GaussianPrior::standard(Eigen::Index dim) {
  return GaussianPrior(Vector::Zero(dim), Vector::Ones(dim));
}

GaussianPrior GaussianPrior::isotropic(Vector mean, double variance) {
  const Eigen::Index n = mean.size();
  return GaussianPrior(std::move(mean), Vector::Constant(n, variance));
}

namespace {

// (D + F F^T)^{-1} applied via the Woodbury identity, with log-determinant.
struct WoodburySolve {
  Vector dinv;
  Matrix dinv_f;
  Eigen::LLT<Matrix> core;
  double logdet = 0.0;

  WoodburySolve(const Vector& d, const Matrix& f) : dinv(d.cwiseInverse()) {
    logdet = d.array().log().sum();
    if (f.cols() > 0) {
      dinv_f = dinv.asDiagonal() * f;
      Matrix m = Matrix::Identity(f.cols(), f.cols()) + f.transpose() * dinv_f;
      core.compute(m);
      const Matrix l = core.matrixL();
      logdet += 2.0 * l.diagonal().array().log().sum();
    }
  }

  Vector apply(const Vector& v) const {
    Vector out = dinv.cwiseProduct(v);
    if (dinv_f.cols() > 0) out -= dinv_f * core.solve(dinv_f.transpose() * v);
    return out;
  }
};

}  // namespace

Vector GaussianPrior::score(const Vector& x, double beta) const {
  check_dim(x, dim());
  WoodburySolve solve(smoothed_diagonal(variance_, beta), factor_);
  return -solve.apply(x - mean_);
}

double GaussianPrior::log_density(const Vector& x, double beta) const {
  check_dim(x, dim());
  WoodburySolve solve(smoothed_diagonal(variance_, beta), factor_);
  const Vector r = x - mean_;
  return -0.5 * (r.dot(solve.apply(r)) + solve.logdet + static_cast<double>(dim()) * kLog2Pi);
}

Vector GaussianPrior::sample(Engine& rng) const {
  Vector out = mean_ + variance_.cwiseSqrt().cwiseProduct(standard_normal(dim(), rng));
  if (factor_.cols() > 0) out += factor_ * standard_normal(factor_.cols(), rng);
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian mixture

GaussianMixturePrior::GaussianMixturePrior(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("mixture needs at least one component");
  const Eigen::Index d = components_.front().mean.size();
  if (d == 0) throw InvalidArgument("mixture components need nonempty means");
  double total = 0.0;
  for (const auto& c : components_) {
    if (c.mean.size() != d || c.variance.size() != d) {
      throw DimensionMismatch("mixture components disagree in dimension");
    }
    if (!(c.weight >= 0.0)) throw InvalidArgument("mixture weights must be nonnegative");
    if ((c.variance.array() < 0.0).any()) throw InvalidArgument("variances must be nonnegative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixture weights must sum to 1");
}

Vector GaussianMixturePrior::log_joint(const Vector& x, double beta) const {
  check_dim(x, dim());
  Vector lj(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    const auto i = static_cast<Eigen::Index>(k);
    if (c.weight == 0.0) {
      lj[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    const Vector d = smoothed_diagonal(c.variance, beta);
    const Vector r = x - c.mean;
    lj[i] = std::log(c.weight) -
            0.5 * (r.cwiseAbs2().cwiseQuotient(d).sum() + d.array().log().sum() +
                   static_cast<double>(dim()) * kLog2Pi);
  }
  return lj;
}

Vector GaussianMixturePrior::responsibilities(const Vector& x, double beta) const {
  const Vector lj = log_joint(x, beta);
  return (lj.array() - log_sum_exp(lj)).exp();
}

Vector GaussianMixturePrior::component_score(std::size_t k, const Vector& x, double beta) const {
  const auto& c = components_.at(k);
  return -(x - c.mean).cwiseQuotient(smoothed_diagonal(c.variance, beta));
}

Vector GaussianMixturePrior::score(const Vector& x, double beta) const {
  const Vector resp = responsibilities(x, beta);
  Vector out = Vector::Zero(dim());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const double r = resp[static_cast<Eigen::Index>(k)];
    if (r > 0.0) out += r * component_score(k, x, beta);
  }
  return out;
}

double GaussianMixturePrior::log_density(const Vector& x, double beta) const {
  return log_sum_exp(log_joint(x, beta));
}

Vector GaussianMixturePrior::sample(Engine& rng) const {
  std::vector<double> w;
  for (const auto& c : components_) w.push_back(c.weight);
  const auto& c = components_[sample_categorical(w, rng)];
  return c.mean + c.variance.cwiseSqrt().cwiseProduct(standard_normal(dim(), rng));
}

Vector GaussianMixturePrior::mean() const {
  Vector m = Vector::Zero(dim());
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

// ---------------------------------------------------------------------------
// Finite distribution

FiniteDistribution::FiniteDistribution(std::vector<Vector> points, std::vector<double> probs)
    : points_(std::move(points)), probs_(std::move(probs)) {
  if (points_.empty()) throw InvalidArgument("finite distribution needs at least one atom");
  if (points_.size() != probs_.size()) throw DimensionMismatch("atom and probability counts differ");
  const Eigen::Index d = points_.front().size();
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != d) throw DimensionMismatch("atoms disagree in dimension");
    if (!(probs_[i] >= 0.0)) throw InvalidArgument("atom probabilities must be nonnegative");
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("atom probabilities must sum to 1");
}

FiniteDistribution FiniteDistribution::normalized(std::vector<Vector> points,
                                                  std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw InvalidArgument("weights must have positive total");
  for (double& w : weights) w /= total;
  // Push the rounding residue onto the heaviest atom so the sum is 1 to within an ulp or two.
  double s = 0.0;
  std::size_t heaviest = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    s += weights[i];
    if (weights[i] > weights[heaviest]) heaviest = i;
  }
  if (!weights.empty()) weights[heaviest] += 1.0 - s;
  return FiniteDistribution(std::move(points), std::move(weights));
}

FiniteDistribution FiniteDistribution::point_mass(Vector point) {
  return FiniteDistribution({std::move(point)}, {1.0});
}

namespace {

Vector finite_log_joint(const FiniteDistribution& f, const Vector& x, double beta) {
  if (!(beta > 0.0)) throw SingularOperator("finite distribution score needs beta > 0");
  Vector lj(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) {
    lj[static_cast<Eigen::Index>(k)] =
        f.prob(k) > 0.0 ? std::log(f.prob(k)) - (x - f.point(k)).squaredNorm() / (2.0 * beta * beta)
                        : -std::numeric_limits<double>::infinity();
  }
  return lj;
}

}  // namespace

Vector FiniteDistribution::score(const Vector& x, double beta) const {
  check_dim(x, dim());
  const Vector lj = finite_log_joint(*this, x, beta);
  const Vector resp = (lj.array() - log_sum_exp(lj)).exp();
  Vector out = Vector::Zero(dim());
  for (std::size_t k = 0; k < size(); ++k) {
    const double r = resp[static_cast<Eigen::Index>(k)];
    if (r > 0.0) out += r * (points_[k] - x);
  }
  return out / (beta * beta);
}

double FiniteDistribution::log_density(const Vector& x, double beta) const {
  check_dim(x, dim());
  const Vector lj = finite_log_joint(*this, x, beta);
  return log_sum_exp(lj) - 0.5 * static_cast<double>(dim()) * (kLog2Pi + 2.0 * std::log(beta));
}

std::size_t FiniteDistribution::sample_index(Engine& rng) const {
  return sample_categorical(probs_, rng);
}

Vector FiniteDistribution::sample(Engine& rng) const { return points_[sample_index(rng)]; }

std::size_t FiniteDistribution::nearest(const Vector& x) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size(); ++k) {
    const double d = (points_[k] - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace lcs
