#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "lcs/error.hpp"
#include "lcs/priors.hpp"

using namespace lcs;

namespace {

Vector randn(Eigen::Index d, Engine& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = g(rng);
  return v;
}

Vector fd_gradient(const Prior& p, const Vector& x, double beta, double h = 1e-5) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (p.log_density(a, beta) - p.log_density(b, beta)) / (2.0 * h);
  }
  return g;
}

GaussianMixturePrior random_mixture(Eigen::Index d, std::size_t k, Engine& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<MixtureComponent> comps;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    Vector var(d);
    for (Eigen::Index j = 0; j < d; ++j) var[j] = u(rng);
    comps.push_back({u(rng), randn(d, rng), var});
    total += comps.back().weight;
  }
  for (auto& c : comps) c.weight /= total;
  return GaussianMixturePrior(comps);
}

FiniteDistribution random_finite_prior(Eigen::Index d, std::size_t k, Engine& rng) {
  std::vector<Vector> pts;
  std::vector<double> w;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    pts.push_back(randn(d, rng));
    w.push_back(u(rng));
  }
  return FiniteDistribution::normalized(pts, w);
}

}  // namespace

TEST(GaussianScore, StandardAtZeroSmoothing) {
  Engine rng(1);
  const GaussianPrior p = GaussianPrior::standard(6);
  const Vector x = randn(6, rng);
  EXPECT_LT((p.score(x, 0.0) + x).norm(), 1e-15);
  EXPECT_NEAR(p.log_density(Vector::Zero(6), 0.0), -3.0 * std::log(2.0 * std::numbers::pi), 1e-12);
}

TEST(GaussianScore, ClosedFormWithLowRank) {
  Engine rng(2);
  const Eigen::Index d = 5;
  Vector var(d);
  var << 0.5, 1.0, 2.0, 0.1, 0.7;
  Matrix f = Matrix::Zero(d, 2);
  f.col(0) = randn(d, rng);
  f.col(1) = randn(d, rng);
  const Vector m = randn(d, rng);
  const GaussianPrior p(m, var, f);
  for (double beta : {0.0, 0.3, 2.0}) {
    const Vector x = randn(d, rng);
    const Matrix cov = Matrix(var.asDiagonal()) + f * f.transpose() + beta * beta * Matrix::Identity(d, d);
    const Vector expect = -cov.ldlt().solve(x - m);
    EXPECT_LT((p.score(x, beta) - expect).norm(), 1e-12 * expect.norm());
    const Vector fd = fd_gradient(p, x, beta);
    EXPECT_LE((fd - p.score(x, beta)).norm(), 1e-5 * p.score(x, beta).norm());
    const double logdet = std::log(cov.determinant());
    const double expect_ld =
        -0.5 * ((x - m).dot(cov.ldlt().solve(x - m)) + logdet + d * std::log(2.0 * std::numbers::pi));
    EXPECT_NEAR(p.log_density(x, beta), expect_ld, 1e-10 * std::abs(expect_ld));
  }
}

TEST(GaussianScore, SingularAtZeroBeta) {
  const GaussianPrior p(Vector::Zero(3), Vector::Zero(3));
  EXPECT_THROW(p.score(Vector::Ones(3), 0.0), SingularOperator);
  EXPECT_NO_THROW(p.score(Vector::Ones(3), 0.1));
}

TEST(MixtureScore, SymmetricPairAtOrigin) {
  Engine rng(3);
  const Vector m = randn(4, rng);
  const GaussianMixturePrior p({{0.5, m, Vector::Constant(4, 0.3)}, {0.5, -m, Vector::Constant(4, 0.3)}});
  for (double beta : {0.0, 0.5, 3.0}) EXPECT_LT(p.score(Vector::Zero(4), beta).norm(), 1e-15);
}

TEST(MixtureScore, SingleComponentReducesToGaussian) {
  Engine rng(4);
  const Vector m = randn(5, rng);
  Vector v(5);
  v << 0.4, 0.9, 1.3, 0.2, 2.0;
  const GaussianMixturePrior mix({{1.0, m, v}});
  const GaussianPrior g(m, v);
  const Vector x = randn(5, rng);
  for (double beta : {0.0, 1.0}) {
    EXPECT_NEAR(mix.log_density(x, beta), g.log_density(x, beta), 1e-12);
    EXPECT_LT((mix.score(x, beta) - g.score(x, beta)).norm(), 1e-14);
  }
}

TEST(MixtureScore, ResponsibilityWeightedSum) {
  Engine rng(5);
  const GaussianMixturePrior p = random_mixture(6, 4, rng);
  const Vector x = randn(6, rng);
  const double beta = 0.7;
  const Vector r = p.responsibilities(x, beta);
  EXPECT_NEAR(r.sum(), 1.0, 1e-14);
  EXPECT_GE(r.minCoeff(), 0.0);
  Vector s = Vector::Zero(6);
  for (std::size_t k = 0; k < 4; ++k) s += r[static_cast<Eigen::Index>(k)] * p.component_score(k, x, beta);
  EXPECT_LT((s - p.score(x, beta)).norm(), 1e-13 * (1.0 + s.norm()));
}

TEST(MixtureScore, StableFarFromComponents) {
  const GaussianMixturePrior p({{0.3, Vector::Zero(2), Vector::Constant(2, 1e-4)},
                                {0.7, Vector::Constant(2, 1.0), Vector::Constant(2, 1e-4)}});
  const Vector x = Vector::Constant(2, 500.0);
  const Vector s = p.score(x, 0.0);
  EXPECT_TRUE(s.allFinite());
  EXPECT_NEAR(s[0], -(500.0 - 1.0) / 1e-4, 1e-6 * 5e6);
}

TEST(Score, FiniteDifferenceConsistency) {
  Engine rng(6);
  std::uniform_real_distribution<double> logb(std::log(1e-3), std::log(10.0));
  std::vector<std::unique_ptr<Prior>> priors;
  Vector var(4);
  var << 0.3, 1.2, 0.8, 2.0;
  priors.push_back(std::make_unique<GaussianPrior>(randn(4, rng), var));
  priors.push_back(std::make_unique<GaussianMixturePrior>(random_mixture(4, 3, rng)));
  priors.push_back(std::make_unique<FiniteDistribution>(random_finite_prior(4, 5, rng)));
  for (const auto& p : priors) {
    for (int t = 0; t < 30; ++t) {
      const double beta = std::exp(logb(rng));
      // keep x at a typical distance so the density is not vanishing
      const Vector x = randn(4, rng, 1.0 + beta);
      const Vector s = p->score(x, beta);
      const double h = 1e-5 * std::max(beta, 1e-2);
      const Vector fd = fd_gradient(*p, x, beta, h);
      EXPECT_LE((fd - s).norm(), 1e-4 * s.norm() + 1e-6) << "beta " << beta;
    }
  }
}

TEST(Score, LargeSmoothingVanishes) {
  Engine rng(7);
  const Vector x = randn(5, rng);
  const GaussianMixturePrior mix = random_mixture(5, 3, rng);
  const FiniteDistribution fin = random_finite_prior(5, 4, rng);
  const GaussianPrior g = GaussianPrior::standard(5);
  for (const Prior* p : std::initializer_list<const Prior*>{&mix, &fin, &g}) {
    EXPECT_LE(p->score(x, 1e6).norm(), 1e-9 * x.norm() + 1e-9);
  }
}

TEST(Finite, ScoreIsSmoothedMixture) {
  Engine rng(8);
  const FiniteDistribution f = random_finite_prior(3, 4, rng);
  std::vector<MixtureComponent> comps;
  for (std::size_t i = 0; i < f.size(); ++i) comps.push_back({f.prob(i), f.point(i), Vector::Zero(3)});
  const GaussianMixturePrior mix(comps);
  const Vector x = randn(3, rng);
  EXPECT_LT((f.score(x, 0.4) - mix.score(x, 0.4)).norm(), 1e-12);
  EXPECT_NEAR(f.log_density(x, 0.4), mix.log_density(x, 0.4), 1e-12);
  EXPECT_THROW(f.score(x, 0.0), SingularOperator);
}

TEST(Finite, Validation) {
  EXPECT_THROW(FiniteDistribution({Vector::Zero(2)}, {0.5}), InvalidArgument);
  EXPECT_THROW(FiniteDistribution({Vector::Zero(2), Vector::Zero(3)}, {0.5, 0.5}), DimensionMismatch);
  EXPECT_THROW(FiniteDistribution({Vector::Zero(2), Vector::Zero(2)}, {1.5, -0.5}), InvalidArgument);
  const FiniteDistribution n = FiniteDistribution::normalized({Vector::Zero(1), Vector::Ones(1)}, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(n.prob(1), 0.75);
  EXPECT_EQ(n.nearest(Vector::Constant(1, 0.5)), 0u);
  EXPECT_EQ(n.nearest(Vector::Constant(1, 0.6)), 1u);
}

TEST(Sample, Degenerate) {
  Engine rng(9);
  const Vector m = randn(4, rng);
  const GaussianMixturePrior p({{1.0, m, Vector::Zero(4)}});
  EXPECT_EQ(p.sample(std::uint64_t{3}), m);
  const FiniteDistribution one = FiniteDistribution::point_mass(m);
  EXPECT_EQ(one.sample(std::uint64_t{11}), m);
  EXPECT_EQ(GaussianPrior(m, Vector::Zero(4)).sample(std::uint64_t{2}), m);
}

TEST(Sample, StandardCovariance) {
  const Eigen::Index d = 6;
  const GaussianPrior p = GaussianPrior::standard(d);
  Engine rng(10);
  const int n = 10000;
  Matrix c = Matrix::Zero(d, d);
  Vector mean = Vector::Zero(d);
  std::vector<Vector> draws;
  for (int i = 0; i < n; ++i) {
    draws.push_back(p.sample(rng));
    mean += draws.back();
  }
  mean /= n;
  for (const Vector& v : draws) c += (v - mean) * (v - mean).transpose();
  c /= n - 1;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(c - Matrix::Identity(d, d));
  EXPECT_LE(es.eigenvalues().cwiseAbs().maxCoeff(), 0.05);
}

TEST(Sample, DeterministicPerSeed) {
  Engine rng(11);
  const GaussianMixturePrior p = random_mixture(5, 3, rng);
  EXPECT_EQ(p.sample(std::uint64_t{42}), p.sample(std::uint64_t{42}));
  EXPECT_NE(p.sample(std::uint64_t{42}), p.sample(std::uint64_t{43}));
}

TEST(Sample, FiniteFrequencies) {
  const FiniteDistribution f({Vector::Zero(1), Vector::Ones(1), Vector::Constant(1, 2.0)}, {0.2, 0.5, 0.3});
  Engine rng(12);
  std::vector<int> count(3, 0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) ++count[f.sample_index(rng)];
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = f.prob(i);
    EXPECT_NEAR(count[i] / double(n), p, 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Mixture, Validation) {
  EXPECT_THROW(GaussianMixturePrior({}), InvalidArgument);
  EXPECT_THROW(GaussianMixturePrior({{0.4, Vector::Zero(2), Vector::Ones(2)}}), InvalidArgument);
  EXPECT_THROW(GaussianMixturePrior({{1.0, Vector::Zero(2), -Vector::Ones(2)}}), InvalidArgument);
  EXPECT_THROW(GaussianMixturePrior({{0.5, Vector::Zero(2), Vector::Ones(2)}, {0.5, Vector::Zero(3), Vector::Ones(3)}}),
               DimensionMismatch);
}

TEST(LogSumExp, Stable) {
  Vector v(3);
  v << 1000.0, 1000.0, -1e308;
  EXPECT_NEAR(log_sum_exp(v), 1000.0 + std::log(2.0), 1e-12);
}
