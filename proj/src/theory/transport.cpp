#include "lcs/theory/transport.hpp"

#include <algorithm>
#include <cmath>

#include "lcs/error.hpp"
#include "lcs/theory/flow.hpp"

namespace lcs::theory {
namespace {

void check_pair(const FiniteDistribution& mu, const FiniteDistribution& nu) {
  if (mu.dim() != nu.dim()) throw DimensionMismatch("distributions live in different dimensions");
}

std::vector<double> pair_distances(const FiniteDistribution& mu, const FiniteDistribution& nu) {
  std::vector<double> d;
  d.reserve(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) d.push_back((mu.point(i) - nu.point(j)).norm());
  }
  return d;
}

struct SubCoupling {
  double mass = 0.0;
  std::vector<FlowEntry> coupling;
};

// Maximum transportable mass (capped at 1) on pairs within `radius`, with
// per-atom caps.
SubCoupling max_subcoupling(const FiniteDistribution& mu, const FiniteDistribution& nu,
                            const std::vector<double>& dist, double radius, const std::vector<double>& cap_mu,
                            const std::vector<double>& cap_nu) {
  const std::size_t n = mu.size(), m = nu.size();
  const std::size_t root = 0, src = 1, sink = 2 + n + m;
  FlowNetwork net(n + m + 3);
  net.add_edge(root, src, 1.0);
  for (std::size_t i = 0; i < n; ++i) net.add_edge(src, 2 + i, cap_mu[i]);
  for (std::size_t j = 0; j < m; ++j) net.add_edge(2 + n + j, sink, cap_nu[j]);
  std::vector<std::pair<std::size_t, std::size_t>> pair_of;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (cap_mu[i] <= 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (cap_nu[j] <= 0.0 || dist[i * m + j] > radius) continue;
      ids.push_back(net.add_edge(2 + i, 2 + n + j, 1.0));
      pair_of.emplace_back(i, j);
    }
  }
  SubCoupling out;
  out.mass = net.max_flow(root, sink);
  for (std::size_t e = 0; e < ids.size(); ++e) {
    const double f = net.flow(ids[e]);
    if (f > FlowNetwork::kEps) out.coupling.push_back({pair_of[e].first, pair_of[e].second, f});
  }
  return out;
}

// Smallest pairwise distance at which the capped problem can move unit mass.
DivergenceResult smallest_feasible_radius(const FiniteDistribution& mu, const FiniteDistribution& nu,
                                          const std::vector<double>& cap_mu, const std::vector<double>& cap_nu) {
  const std::vector<double> dist = pair_distances(mu, nu);
  std::vector<double> grid = dist;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::size_t lo = 0, hi = grid.size() - 1;
  SubCoupling best = max_subcoupling(mu, nu, dist, grid[hi], cap_mu, cap_nu);
  if (best.mass < 1.0 - kMassTol) throw NumericalError("transport problem infeasible at the largest radius");
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    SubCoupling s = max_subcoupling(mu, nu, dist, grid[mid], cap_mu, cap_nu);
    if (s.mass >= 1.0 - kMassTol) {
      hi = mid;
      best = std::move(s);
    } else {
      lo = mid + 1;
    }
  }
  DivergenceResult r;
  r.value = grid[lo];
  r.certificate.epsilon = grid[lo];
  r.certificate.coupling = best.coupling;
  r.certificate.mu_prime.assign(mu.size(), 0.0);
  r.certificate.nu_prime.assign(nu.size(), 0.0);
  for (const auto& f : best.coupling) {
    r.certificate.mu_prime[f.from] += f.mass;
    r.certificate.nu_prime[f.to] += f.mass;
  }
  return r;
}

}  // namespace

double wasserstein_inf(const FiniteDistribution& mu, const FiniteDistribution& nu) {
  return delta_alpha_winf(mu, nu, 0.0, 0.0).value;
}

DivergenceResult delta_alpha_winf(const FiniteDistribution& mu, const FiniteDistribution& nu, double delta,
                                  double alpha) {
  check_pair(mu, nu);
  if (!(delta >= 0.0 && delta < 1.0) || !(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidArgument("delta and alpha must lie in [0, 1)");
  }
  std::vector<double> cap_mu(mu.size()), cap_nu(nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) cap_mu[i] = mu.prob(i) / (1.0 - delta);
  for (std::size_t j = 0; j < nu.size(); ++j) cap_nu[j] = nu.prob(j) / (1.0 - alpha);
  DivergenceResult r = smallest_feasible_radius(mu, nu, cap_mu, cap_nu);
  r.certificate.delta = delta;
  r.certificate.alpha = alpha;
  r.certificate.mu_in_mass = 1.0 - delta;
  r.certificate.nu_in_mass = 1.0 - alpha;
  return r;
}

TransportPlan wasserstein_q_plan(const FiniteDistribution& mu, const FiniteDistribution& nu, double q) {
  check_pair(mu, nu);
  if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidArgument("W_q needs finite q >= 1");
  const std::size_t n = mu.size(), m = nu.size();
  const std::size_t src = 0, sink = 1 + n + m;
  FlowNetwork net(n + m + 2);
  for (std::size_t i = 0; i < n; ++i) net.add_edge(src, 1 + i, mu.prob(i));
  for (std::size_t j = 0; j < m; ++j) net.add_edge(1 + n + j, sink, nu.prob(j));
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      ids.push_back(net.add_edge(1 + i, 1 + n + j, 1.0, std::pow((mu.point(i) - nu.point(j)).norm(), q)));
    }
  }
  TransportPlan plan;
  const double sent = net.min_cost_flow(src, sink, 1.0, plan.cost);
  if (sent < 1.0 - kMassTol) throw NumericalError("min-cost flow could not route unit mass");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double f = net.flow(ids[i * m + j]);
      if (f > FlowNetwork::kEps) plan.coupling.push_back({i, j, f});
    }
  }
  plan.cost = std::max(plan.cost, 0.0);
  plan.value = std::pow(plan.cost, 1.0 / q);
  return plan;
}

double wasserstein_q(const FiniteDistribution& mu, const FiniteDistribution& nu, double q) {
  return wasserstein_q_plan(mu, nu, q).value;
}

bool verify_certificate(const SplitCertificate& cert, const FiniteDistribution& mu,
                        const FiniteDistribution& nu, std::string* reason, double tol) {
  auto fail = [&](const char* why) {
    if (reason != nullptr) *reason = why;
    return false;
  };
  std::vector<double> mu_m(mu.size(), 0.0), nu_m(nu.size(), 0.0);
  double total = 0.0;
  for (const auto& f : cert.coupling) {
    if (f.from >= mu.size() || f.to >= nu.size()) return fail("coupling references a missing atom");
    if (f.mass < 0.0) return fail("negative flow");
    if ((mu.point(f.from) - nu.point(f.to)).norm() > cert.epsilon * (1.0 + 1e-12) + 1e-15) {
      return fail("flow on a pair farther than epsilon");
    }
    mu_m[f.from] += f.mass;
    nu_m[f.to] += f.mass;
    total += f.mass;
  }
  if (std::abs(total - 1.0) > tol) return fail("total flow differs from 1");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu_m[i] > mu.prob(i) / (1.0 - cert.delta) + tol) return fail("mu' exceeds mu / (1 - delta)");
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (nu_m[j] > nu.prob(j) / (1.0 - cert.alpha) + tol) return fail("nu' exceeds nu / (1 - alpha)");
  }
  return true;
}

}  // namespace lcs::theory
