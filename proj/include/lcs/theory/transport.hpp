#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lcs/priors.hpp"

namespace lcs::theory {

struct FlowEntry {
  std::size_t from;  // atom index in mu
  std::size_t to;    // atom index in nu
  double mass;
};

// Witness for a (delta, alpha)-W_inf bound: a transport plan of total mass 1
// between mu' <= mu / (1 - delta) and nu' <= nu / (1 - alpha), moving no mass
// farther than epsilon.
struct SplitCertificate {
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  std::vector<FlowEntry> coupling;
  std::vector<double> mu_prime;  // marginal of the coupling on mu's atoms
  std::vector<double> nu_prime;  // marginal on nu's atoms
  double mu_in_mass = 1.0;       // 1 - delta: share of mu carried by mu'
  double nu_in_mass = 1.0;       // 1 - alpha
};

struct DivergenceResult {
  double value = 0.0;
  SplitCertificate certificate;
};

struct TransportPlan {
  double value = 0.0;  // W_q
  double cost = 0.0;   // sum mass * ||u - v||^q
  std::vector<FlowEntry> coupling;
};

// Mass tolerance used when deciding whether a flow reaches total mass one.
inline constexpr double kMassTol = 1e-9;

double wasserstein_inf(const FiniteDistribution& mu, const FiniteDistribution& nu);
TransportPlan wasserstein_q_plan(const FiniteDistribution& mu, const FiniteDistribution& nu, double q);
double wasserstein_q(const FiniteDistribution& mu, const FiniteDistribution& nu, double q);

DivergenceResult delta_alpha_winf(const FiniteDistribution& mu, const FiniteDistribution& nu, double delta,
                                  double alpha);

// Independent re-check of a certificate; on failure `reason` says why.
bool verify_certificate(const SplitCertificate& cert, const FiniteDistribution& mu,
                        const FiniteDistribution& nu, std::string* reason = nullptr, double tol = 1e-9);

}  // namespace lcs::theory
