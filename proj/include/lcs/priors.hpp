#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "lcs/rng.hpp"

namespace lcs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A distribution on R^d (images are mapped to R^{2N} via to_channels). Every
// prior exposes the score of its Gaussian-smoothed density
//   f(x; beta) = grad log (mu * N(0, beta^2 I))(x)
// together with the smoothed log-density and exact sampling. A learned score
// model would slot in behind the same interface.
class Prior {
 public:
  virtual ~Prior() = default;

  virtual Eigen::Index dim() const = 0;
  virtual Vector score(const Vector& x, double beta) const = 0;
  virtual double log_density(const Vector& x, double beta) const = 0;
  virtual Vector sample(Engine& rng) const = 0;

  Vector sample(std::uint64_t seed) const {
    Engine rng(derive_seed(seed, 0));
    return sample(rng);
  }
};

// N(mean, diag(variance) + F F^T). The low-rank factor F may have zero columns.
class GaussianPrior final : public Prior {
 public:
  GaussianPrior(Vector mean, Vector variance, Matrix factor = Matrix());
  static GaussianPrior standard(Eigen::Index dim);
  static GaussianPrior isotropic(Vector mean, double variance);

  Eigen::Index dim() const override { return mean_.size(); }
  Vector score(const Vector& x, double beta) const override;
  double log_density(const Vector& x, double beta) const override;
  Vector sample(Engine& rng) const override;
  using Prior::sample;

  const Vector& mean() const noexcept { return mean_; }
  const Vector& variance() const noexcept { return variance_; }
  const Matrix& factor() const noexcept { return factor_; }

 private:
  Vector mean_;
  Vector variance_;
  Matrix factor_;
};

struct MixtureComponent {
  double weight = 1.0;
  Vector mean;
  Vector variance;  // diagonal covariance
};

class GaussianMixturePrior final : public Prior {
 public:
  explicit GaussianMixturePrior(std::vector<MixtureComponent> components);

  Eigen::Index dim() const override { return components_.front().mean.size(); }
  Vector score(const Vector& x, double beta) const override;
  double log_density(const Vector& x, double beta) const override;
  Vector sample(Engine& rng) const override;
  using Prior::sample;

  // Posterior component probabilities under the beta-smoothed mixture.
  Vector responsibilities(const Vector& x, double beta) const;
  // Score of component k alone, -(Sigma_k + beta^2 I)^{-1}(x - m_k).
  Vector component_score(std::size_t k, const Vector& x, double beta) const;
  Vector mean() const;

  const std::vector<MixtureComponent>& components() const noexcept { return components_; }

 private:
  Vector log_joint(const Vector& x, double beta) const;

  std::vector<MixtureComponent> components_;
};

// Discrete distribution over a finite set of points of a common dimension.
// Smoothing by N(0, beta^2 I) turns it into an isotropic Gaussian mixture, so
// score and log_density require beta > 0.
class FiniteDistribution final : public Prior {
 public:
  FiniteDistribution(std::vector<Vector> points, std::vector<double> probs);
  // Rescales nonnegative weights to sum to one.
  static FiniteDistribution normalized(std::vector<Vector> points, std::vector<double> weights);
  static FiniteDistribution point_mass(Vector point);

  std::size_t size() const noexcept { return points_.size(); }
  const Vector& point(std::size_t i) const { return points_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }
  const std::vector<Vector>& points() const noexcept { return points_; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  Eigen::Index dim() const override { return points_.front().size(); }
  Vector score(const Vector& x, double beta) const override;
  double log_density(const Vector& x, double beta) const override;
  Vector sample(Engine& rng) const override;
  using Prior::sample;
  std::size_t sample_index(Engine& rng) const;

  // Index of the atom nearest to x (l2), ties broken by lowest index.
  std::size_t nearest(const Vector& x) const;

 private:
  std::vector<Vector> points_;
  std::vector<double> probs_;
};

// Draws an index from nonnegative probabilities summing to one.
std::size_t sample_categorical(const std::vector<double>& probs, Engine& rng);

double log_sum_exp(const Vector& v);

}  // namespace lcs
