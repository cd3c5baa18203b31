#pragma once

// Finite-ensemble model: exact observables are replaced by sample
// covariances whose law is (M-1) Sigma_hat ~ W_m(Sigma, M-1).

#include <cstdint>

#include <Eigen/Dense>

#include "ripc/rng.hpp"

namespace ripc {

struct SamplingConfig {
  bool enabled = false;
  double ensemble_size = 0.0;  // M; a double so surrogates like 1e8 are representable
  std::uint64_t seed = 0;

  /// Throws InvalidArgument unless M >= m + 2.
  void validate(int dimension) const;
};

/// Bartlett draw of Sigma_hat with (M-1) Sigma_hat ~ W_m(Sigma, M-1). Throws
/// NotPositiveDefinite when Sigma has no Cholesky factor.
Eigen::MatrixXd wishart_sample(const Eigen::MatrixXd& sigma, double ensemble_size, Philox4x32& rng);

Eigen::MatrixXd wishart_sample(const Eigen::MatrixXd& sigma, double ensemble_size, std::uint64_t seed);

/// Sampled x-x covariance block for one timestep, as readout features (upper
/// triangle). A matrix that fails Cholesky is retried once with +1e-10 I;
/// `regularized` reports whether that happened.
Eigen::VectorXd noisy_features(const Eigen::MatrixXd& x_block, double ensemble_size, Philox4x32& rng,
                               bool* regularized = nullptr);

}  // namespace ripc
