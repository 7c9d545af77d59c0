#include "lcs/theory/posterior.hpp"

#include <cmath>
#include <limits>

#include "lcs/error.hpp"

namespace lcs::theory {

FiniteDistribution brute_posterior_residuals(const FiniteDistribution& prior,
                                             const std::vector<double>& sq_residuals, double sigma, double m) {
  const std::size_t n = prior.size();
  if (sq_residuals.size() != n) throw DimensionMismatch("one residual per atom expected");
  if (!(sigma >= 0.0) || !(m > 0.0)) throw InvalidArgument("need sigma >= 0 and m > 0");

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  Vector logw(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double lp = prior.prob(k) > 0.0 ? std::log(prior.prob(k)) : kNegInf;
    double ll;
    if (sigma == 0.0) {
      ll = sq_residuals[k] <= 0.0 ? 0.0 : kNegInf;
    } else {
      ll = -m * sq_residuals[k] / (2.0 * sigma * sigma);
    }
    logw[static_cast<Eigen::Index>(k)] = lp + ll;
  }
  const double lse = log_sum_exp(logw);
  if (!std::isfinite(lse)) throw NumericalError("posterior weights underflow for every atom");
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = std::exp(logw[static_cast<Eigen::Index>(k)] - lse);
  return FiniteDistribution::normalized(prior.points(), std::move(w));
}

FiniteDistribution brute_posterior(const FiniteDistribution& prior, const Matrix& A, const Vector& y, double sigma,
                                   double m) {
  if (A.cols() != prior.dim() || A.rows() != y.size()) throw DimensionMismatch("A, y and prior disagree");
  std::vector<double> r(prior.size());
  for (std::size_t k = 0; k < prior.size(); ++k) r[k] = (y - A * prior.point(k)).squaredNorm();
  return brute_posterior_residuals(prior, r, sigma, m);
}

}  // namespace lcs::theory
