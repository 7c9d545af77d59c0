#include "lcs/theory/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lcs/parallel.hpp"
#include "lcs/rng.hpp"
#include "lcs/theory/covering.hpp"
#include "lcs/theory/posterior.hpp"

namespace lcs::theory {
namespace {

Vector gaussian(Eigen::Index n, double std, Engine& rng) {
  std::normal_distribution<double> g(0.0, std);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

double rate_se(double p, std::size_t n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n)); }

}  // namespace

std::string to_string(Metric m) { return m == Metric::L2 ? "l2" : "linf"; }

Metric parse_metric(const std::string& s) {
  if (s == "l2") return Metric::L2;
  if (s == "linf") return Metric::Linf;
  throw InvalidArgument("unknown metric '" + s + "' (expected l2 or linf)");
}

double distance(const Vector& a, const Vector& b, Metric metric) {
  if (a.size() != b.size()) throw DimensionMismatch("distance between vectors of different length");
  return metric == Metric::L2 ? (a - b).norm() : (a - b).lpNorm<Eigen::Infinity>();
}

Matrix GaussianMeasurementEnsemble::matrix(Engine& rng) const {
  if (m < 1 || n < 1) throw InvalidArgument("measurement ensemble needs m, n >= 1");
  std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(static_cast<double>(m)));
  Matrix A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = g(rng);
  }
  return A;
}

Vector GaussianMeasurementEnsemble::noise(Engine& rng) const {
  return gaussian(static_cast<Eigen::Index>(m), sigma / std::sqrt(static_cast<double>(m)), rng);
}

// ---------------------------------------------------------------------------

Theorem2Report validate_theorem2(const FiniteDistribution& prior, const LinearForward& forward,
                                 const std::vector<double>& eps, std::size_t trials, std::uint64_t seed,
                                 Metric metric, std::size_t threads) {
  if (trials == 0) throw InvalidArgument("trials must be positive");
  if (eps.empty()) throw InvalidArgument("at least one eps required");
  for (double e : eps) {
    if (!(e > 0.0)) throw InvalidArgument("eps must be positive");
  }
  if (forward.A.cols() != prior.dim()) throw DimensionMismatch("forward operator does not match prior dimension");
  if (!(forward.sigma >= 0.0) || !(forward.m > 0.0)) throw InvalidArgument("need sigma >= 0 and m > 0");

  // Candidate outputs for the reference algorithm.
  std::vector<Vector> cand = prior.points();
  for (std::size_t i = 0; i < prior.size(); ++i) {
    for (std::size_t j = i + 1; j < prior.size(); ++j) cand.push_back(0.5 * (prior.point(i) + prior.point(j)));
  }
  const std::size_t ne = eps.size();
  std::vector<std::vector<std::vector<char>>> in_ball(ne);  // [eps][candidate][atom]
  for (std::size_t e = 0; e < ne; ++e) {
    in_ball[e].assign(cand.size(), std::vector<char>(prior.size(), 0));
    for (std::size_t c = 0; c < cand.size(); ++c) {
      for (std::size_t k = 0; k < prior.size(); ++k) {
        in_ball[e][c][k] = distance(cand[c], prior.point(k), metric) <= eps[e] * (1.0 + 1e-12);
      }
    }
  }
  std::vector<Vector> images(prior.size());
  for (std::size_t k = 0; k < prior.size(); ++k) images[k] = forward.A * prior.point(k);
  const double noise_std = forward.sigma / std::sqrt(forward.m);

  std::vector<char> fail_alg(trials * ne), fail_ps(trials * ne);
  parallel_for(trials, threads, [&](std::size_t t) {
    Engine rng = make_engine(seed, t);
    const std::size_t k = prior.sample_index(rng);
    const Vector& x = prior.point(k);
    const Vector y = images[k] + gaussian(forward.A.rows(), noise_std, rng);
    std::vector<double> r(prior.size());
    for (std::size_t j = 0; j < prior.size(); ++j) r[j] = (y - images[j]).squaredNorm();
    const FiniteDistribution post = brute_posterior_residuals(prior, r, forward.sigma, forward.m);
    const Vector& xhat = post.point(post.sample_index(rng));
    for (std::size_t e = 0; e < ne; ++e) {
      std::size_t best = 0;
      double best_mass = -1.0;
      for (std::size_t c = 0; c < cand.size(); ++c) {
        double mass = 0.0;
        for (std::size_t j = 0; j < prior.size(); ++j) {
          if (in_ball[e][c][j]) mass += post.prob(j);
        }
        if (mass > best_mass) {
          best_mass = mass;
          best = c;
        }
      }
      fail_alg[t * ne + e] = distance(cand[best], x, metric) > eps[e];
      fail_ps[t * ne + e] = distance(xhat, x, metric) > 2.0 * eps[e];
    }
  });

  Theorem2Report rep;
  rep.metric = metric;
  rep.trials = trials;
  rep.seed = seed;
  rep.holds = true;
  for (std::size_t e = 0; e < ne; ++e) {
    std::size_t na = 0, np = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      na += static_cast<std::size_t>(fail_alg[t * ne + e]);
      np += static_cast<std::size_t>(fail_ps[t * ne + e]);
    }
    Theorem2Point p;
    p.eps = eps[e];
    p.delta_alg = static_cast<double>(na) / static_cast<double>(trials);
    p.delta_ps = static_cast<double>(np) / static_cast<double>(trials);
    p.se_alg = rate_se(p.delta_alg, trials);
    p.se_ps = rate_se(p.delta_ps, trials);
    p.threshold = 2.0 * p.delta_alg + 3.0 * std::sqrt(p.se_ps * p.se_ps + 4.0 * p.se_alg * p.se_alg);
    p.holds = p.delta_ps <= p.threshold;
    rep.holds = rep.holds && p.holds;
    rep.points.push_back(p);
  }
  return rep;
}

// ---------------------------------------------------------------------------

Theorem1Report validate_theorem1(const Theorem1Config& cfg) {
  if (cfg.trials == 0) throw InvalidArgument("trials must be positive");
  if (cfg.m_grid.empty()) throw InvalidArgument("m grid is empty");
  if (cfg.c_grid.empty()) throw InvalidArgument("c grid is empty");
  if (!(cfg.eps > 0.0) || !(cfg.sigma > 0.0)) throw InvalidArgument("eps and sigma must be positive");
  if (cfg.mu.dim() != cfg.nu.dim()) throw DimensionMismatch("mu and nu live in different dimensions");
  for (std::size_t m : cfg.m_grid) {
    if (m == 0) throw InvalidArgument("m must be at least 1");
  }

  Theorem1Report rep;
  const DivergenceResult div = delta_alpha_winf(cfg.mu, cfg.nu, cfg.delta, cfg.alpha);
  rep.divergence = div.value;
  rep.certificate = div.certificate;
  if (div.value > cfg.eps) {
    throw TheoryPreconditionError("(delta, alpha)-W_inf divergence " + std::to_string(div.value) +
                                  " exceeds eps " + std::to_string(cfg.eps));
  }
  const CoveringResult cm = approx_covering_number(cfg.mu, cfg.sigma, cfg.delta);
  const CoveringResult cn = approx_covering_number(cfg.nu, cfg.sigma, cfg.delta);
  rep.covering_mu = cm.count;
  rep.covering_nu = cn.count;
  rep.covering_exact = cm.exact && cn.exact;
  rep.m_grid = cfg.m_grid;

  const std::size_t nm = cfg.m_grid.size();
  const auto n = static_cast<std::size_t>(cfg.mu.dim());
  std::vector<double> err(nm * cfg.trials);
  for (std::size_t mi = 0; mi < nm; ++mi) {
    GaussianMeasurementEnsemble ens{cfg.m_grid[mi], n, cfg.sigma, cfg.seed};
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      Engine rng = make_engine(derive_seed(cfg.seed, mi), t);
      const Vector& x = cfg.mu.point(cfg.mu.sample_index(rng));
      const Matrix A = ens.matrix(rng);
      const Vector y = A * x + ens.noise(rng);
      const FiniteDistribution post =
          brute_posterior(cfg.nu, A, y, cfg.sigma, static_cast<double>(cfg.m_grid[mi]));
      err[mi * cfg.trials + t] = (post.point(post.sample_index(rng)) - x).norm();
    });
  }

  std::vector<double> cs = cfg.c_grid;
  std::sort(cs.begin(), cs.end());
  rep.holds = false;
  for (double c : cs) {
    Theorem1Curve cur;
    cur.c = c;
    const double radius = c * (cfg.eps + cfg.sigma);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      std::size_t fails = 0;
      for (std::size_t t = 0; t < cfg.trials; ++t) fails += err[mi * cfg.trials + t] > radius ? 1U : 0U;
      const double p = static_cast<double>(fails) / static_cast<double>(cfg.trials);
      cur.failure.push_back(p);
      cur.se.push_back(rate_se(p, cfg.trials));
    }
    cur.final_below = cur.failure.back() < cfg.delta + cfg.slack;
    cur.nonincreasing = true;
    for (std::size_t mi = 0; mi + 1 < nm; ++mi) {
      const double tol = 3.0 * std::hypot(cur.se[mi], cur.se[mi + 1]);
      if (cur.failure[mi + 1] > cur.failure[mi] + tol) cur.nonincreasing = false;
    }
    if (!rep.smallest_passing_c && cur.final_below) {
      rep.smallest_passing_c = c;
      rep.holds = cur.nonincreasing;
    }
    rep.curves.push_back(std::move(cur));
  }
  return rep;
}

// ---------------------------------------------------------------------------

Lemma1Check lemma1_check(const FiniteDistribution& mu, const FiniteDistribution& nu, double q, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("lemma check needs delta in (0, 1)");
  Lemma1Check r;
  r.wq = wasserstein_q(mu, nu, q);
  r.divergence = delta_alpha_winf(mu, nu, delta, delta).value;
  r.bound = r.wq / std::pow(delta, 1.0 / q) + 1e-9;
  r.holds = r.divergence <= r.bound;
  return r;
}

TwoPoint lemma1_counterexample(double r, double eps0, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  auto pt = [](double v) { return Vector::Constant(1, v); };
  return {FiniteDistribution({pt(0.0), pt(r)}, {1.0 - delta, delta}),
          FiniteDistribution({pt(eps0), pt(-r)}, {1.0 - delta, delta})};
}

FiniteDistribution random_finite(std::size_t atoms, Eigen::Index dim, double scale, Engine& rng) {
  if (atoms == 0 || dim < 1) throw InvalidArgument("random distribution needs atoms and dim >= 1");
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<Vector> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < atoms; ++i) {
    pts.push_back(gaussian(dim, scale, rng));
    w.push_back(u(rng));
  }
  return FiniteDistribution::normalized(std::move(pts), std::move(w));
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const SplitCertificate& c) {
  nlohmann::json flows = nlohmann::json::array();
  for (const auto& f : c.coupling) flows.push_back({{"from", f.from}, {"to", f.to}, {"mass", f.mass}});
  return {{"epsilon", c.epsilon},       {"delta", c.delta},         {"alpha", c.alpha},
          {"coupling", flows},          {"mu_prime", c.mu_prime},    {"nu_prime", c.nu_prime},
          {"mu_in_mass", c.mu_in_mass}, {"nu_in_mass", c.nu_in_mass}};
}

nlohmann::json to_json(const Theorem2Report& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"eps", p.eps},
                   {"delta_alg", p.delta_alg},
                   {"se_alg", p.se_alg},
                   {"delta_ps_2eps", p.delta_ps},
                   {"se_ps", p.se_ps},
                   {"threshold", p.threshold},
                   {"holds", p.holds}});
  }
  return {{"metric", to_string(r.metric)}, {"trials", r.trials}, {"seed", r.seed}, {"points", pts},
          {"holds", r.holds}};
}

nlohmann::json to_json(const Theorem1Report& r) {
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : r.curves) {
    curves.push_back({{"c", c.c},
                      {"failure", c.failure},
                      {"se", c.se},
                      {"final_below", c.final_below},
                      {"nonincreasing", c.nonincreasing}});
  }
  nlohmann::json j = {{"divergence", r.divergence},
                      {"certificate", to_json(r.certificate)},
                      {"covering_mu", r.covering_mu},
                      {"covering_nu", r.covering_nu},
                      {"covering_exact", r.covering_exact},
                      {"m_grid", r.m_grid},
                      {"curves", curves},
                      {"holds", r.holds}};
  j["smallest_passing_c"] = r.smallest_passing_c ? nlohmann::json(*r.smallest_passing_c) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const Lemma1Check& r) {
  return {{"wq", r.wq}, {"divergence", r.divergence}, {"bound", r.bound}, {"holds", r.holds}};
}

void write_csv(std::ostream& os, const Theorem2Report& r) {
  os << "metric,eps,delta_alg,se_alg,delta_ps_2eps,se_ps,threshold,holds\n";
  for (const auto& p : r.points) {
    os << to_string(r.metric) << ',' << p.eps << ',' << p.delta_alg << ',' << p.se_alg << ',' << p.delta_ps << ','
       << p.se_ps << ',' << p.threshold << ',' << (p.holds ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& os, const Theorem1Report& r) {
  os << "c,m,failure,se\n";
  for (const auto& c : r.curves) {
    for (std::size_t i = 0; i < r.m_grid.size(); ++i) {
      os << c.c << ',' << r.m_grid[i] << ',' << c.failure[i] << ',' << c.se[i] << '\n';
    }
  }
}

}  // namespace lcs::theory
