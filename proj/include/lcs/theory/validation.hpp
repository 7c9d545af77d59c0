#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lcs/error.hpp"
#include "lcs/priors.hpp"
#include "lcs/theory/transport.hpp"

namespace lcs::theory {

class TheoryPreconditionError : public Error {
 public:
  using Error::Error;
};

enum class Metric { L2, Linf };
std::string to_string(Metric m);
Metric parse_metric(const std::string& s);
double distance(const Vector& a, const Vector& b, Metric metric);

// y = A x + w with w ~ N(0, sigma^2 / m I).
struct LinearForward {
  Matrix A;
  double sigma = 0.0;
  double m = 1.0;
};

// A_ij ~ N(0, 1/m), for measurement count m and ambient dimension n.
struct GaussianMeasurementEnsemble {
  std::size_t m = 1;
  std::size_t n = 1;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  Matrix matrix(Engine& rng) const;
  Vector noise(Engine& rng) const;
};

struct Theorem2Point {
  double eps = 0.0;
  double delta_alg = 0.0;  // failure rate of the reference algorithm at eps
  double se_alg = 0.0;
  double delta_ps = 0.0;   // failure rate of posterior sampling at 2 eps
  double se_ps = 0.0;
  double threshold = 0.0;  // 2 delta_alg + 3 SE
  bool holds = false;
};

struct Theorem2Report {
  Metric metric = Metric::L2;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<Theorem2Point> points;
  bool holds = false;
};

Theorem2Report validate_theorem2(const FiniteDistribution& prior, const LinearForward& forward,
                                 const std::vector<double>& eps, std::size_t trials, std::uint64_t seed,
                                 Metric metric = Metric::L2, std::size_t threads = 1);

struct Theorem1Config {
  Theorem1Config(FiniteDistribution mu_, FiniteDistribution nu_) : mu(std::move(mu_)), nu(std::move(nu_)) {}

  FiniteDistribution mu;
  FiniteDistribution nu;
  double delta = 0.0;
  double alpha = 0.0;
  double eps = 0.0;
  double sigma = 0.0;
  std::vector<std::size_t> m_grid;
  std::vector<double> c_grid;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double slack = 0.05;
  std::size_t threads = 1;
};

struct Theorem1Curve {
  double c = 0.0;
  std::vector<double> failure;  // one per m
  std::vector<double> se;
  bool final_below = false;     // failure at the largest m < delta + slack
  bool nonincreasing = false;   // within 3 SE between consecutive m
};

struct Theorem1Report {
  double divergence = 0.0;
  SplitCertificate certificate;
  std::size_t covering_mu = 0;
  std::size_t covering_nu = 0;
  bool covering_exact = true;
  std::vector<std::size_t> m_grid;
  std::vector<Theorem1Curve> curves;  // one per c
  std::optional<double> smallest_passing_c;
  bool holds = false;
};

// Throws TheoryPreconditionError if the (delta, alpha)-W_inf divergence
// exceeds eps.
Theorem1Report validate_theorem1(const Theorem1Config& cfg);

struct Lemma1Check {
  double wq = 0.0;
  double divergence = 0.0;  // (delta, delta)-W_inf
  double bound = 0.0;       // wq / delta^(1/q) + 1e-9
  bool holds = false;
};

Lemma1Check lemma1_check(const FiniteDistribution& mu, const FiniteDistribution& nu, double q, double delta);

struct TwoPoint {
  FiniteDistribution mu;
  FiniteDistribution nu;
};

// mu = {0 w.p. 1-delta, r w.p. delta}, nu = {eps0 w.p. 1-delta, -r w.p. delta}.
TwoPoint lemma1_counterexample(double r, double eps0, double delta);

// Atoms ~ N(0, scale^2 I), weights uniform on [0.05, 1] then normalised.
FiniteDistribution random_finite(std::size_t atoms, Eigen::Index dim, double scale, Engine& rng);

nlohmann::json to_json(const SplitCertificate& c);
nlohmann::json to_json(const Theorem2Report& r);
nlohmann::json to_json(const Theorem1Report& r);
nlohmann::json to_json(const Lemma1Check& r);
void write_csv(std::ostream& os, const Theorem2Report& r);
void write_csv(std::ostream& os, const Theorem1Report& r);

}  // namespace lcs::theory
