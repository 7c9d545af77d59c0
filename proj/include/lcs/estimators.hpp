#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lcs/acquisition.hpp"
#include "lcs/signal.hpp"

namespace lcs {

// Coil-combined adjoint reconstruction A^H y.
ComplexImage zero_filled(const AcquisitionModel& model, const KSpace& k);

struct CgSettings {
  std::size_t max_iters = 200;
  double tol = 1e-8;  // on ||A^H (y - A x)|| / ||A^H y||
  void validate() const;
};

struct MvueResult {
  ComplexImage image;
  std::size_t iterations = 0;
  bool converged = false;
  // Per iterate, starting with x_0 = 0.
  std::vector<double> normal_residual;  // ||A^H y - A^H A x_k||
  std::vector<double> data_residual;    // ||y - A x_k||
};

// Least-squares (lambda = 0) solution of A^H A x = A^H y by conjugate
// gradients. Non-convergence is reported through `converged`, not thrown.
MvueResult mvue(const AcquisitionModel& model, const KSpace& y, const CgSettings& cg = {});

// sqrt(sum_i |F^H y_i|^2); meant for fully sampled k-space.
RealImage rss(const KSpace& k);

struct WaveletSettings {
  std::size_t levels = 3;
  double lambda = 0.01;
  std::size_t iters = 100;
  double step = 0.0;  // 0 selects 0.9 / ||A||^2 from a power-iteration estimate
  double tol = 0.0;   // stop when ||x_{k+1} - x_k|| <= tol * ||x_k||; 0 runs all iterations
  void validate(std::size_t height, std::size_t width) const;
};

struct IstaResult {
  ComplexImage image;
  std::size_t iterations = 0;
  double step = 0.0;
  // Objective 0.5 ||y - A x||^2 + lambda ||W x||_1 per iterate, x_0 = 0 first.
  std::vector<double> objective;
  // Set when an iteration increased the objective (step above 1/||A||^2).
  bool objective_increased = false;
};

IstaResult l1_wavelet(const AcquisitionModel& model, const KSpace& y, const WaveletSettings& settings = {});

// Objective value used by l1_wavelet.
double l1_wavelet_objective(const AcquisitionModel& model, const KSpace& y, const ComplexImage& x,
                            const WaveletSettings& settings);
// ||x - prox(x - step * grad)|| / max(||x||, 1e-300): zero exactly at ISTA fixed points.
double ista_stationarity(const AcquisitionModel& model, const KSpace& y, const ComplexImage& x,
                         const WaveletSettings& settings, double step);

// Largest eigenvalue of A^H A by power iteration.
double operator_norm_sq(const AcquisitionModel& model, std::size_t iters = 50, std::uint64_t seed = 7);

// Soft-thresholding of the Haar coefficients of the real and imaginary channels.
ComplexImage wavelet_shrink(const ComplexImage& x, std::size_t levels, double threshold);
// sum of |coefficients| of both channels.
double wavelet_l1(const ComplexImage& x, std::size_t levels);

// Nearest-rank percentile: the ceil(q * n)-th smallest value (1-based), q in (0, 1].
double percentile_nearest_rank(std::vector<double> values, double q);

struct Normalized {
  ComplexImage image;
  double scale = 1.0;
};

// Divides by the 99th percentile of |x|.
Normalized normalize_99(const ComplexImage& x);

}  // namespace lcs
