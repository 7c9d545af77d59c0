#pragma once

#include <vector>

#include "lcs/priors.hpp"

namespace lcs::theory {

// Exact posterior of a finite prior under y = A z + w, w ~ N(0, sigma^2/m I):
// weights proportional to prior(z_k) exp(-m ||y - A z_k||^2 / (2 sigma^2)).
// sigma = 0 keeps only atoms that reproduce y exactly.
FiniteDistribution brute_posterior(const FiniteDistribution& prior, const Matrix& A, const Vector& y, double sigma,
                                   double m = 1.0);

// Same, from precomputed squared residuals ||y - A z_k||^2.
FiniteDistribution brute_posterior_residuals(const FiniteDistribution& prior,
                                             const std::vector<double>& sq_residuals, double sigma, double m = 1.0);

}  // namespace lcs::theory
