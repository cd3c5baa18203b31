#pragma once

// Squeezed-vacuum input encoding with input-modulated squeezing phase.
//
// Mode j at step t is a squeezed vacuum of fixed magnitude r whose phase is
//   phi_t[j] = sum_{tau=0}^{tau_max} c[j][tau] * s_{t-tau}.
// The single-mode covariance is R(phi/2) diag(e^{2r}, e^{-2r}) R(phi/2)^T, so
// its entries are affine in cos(phi) and sin(phi).

#include <cstddef>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "ripc/gaussian.hpp"
#include "ripc/signal.hpp"

namespace ripc {

struct EncodingConfig {
  int n_modes = 1;
  double r = 0.75;
  int tau_max = 0;
  Eigen::MatrixXd coefficients;  // n_modes x (tau_max + 1)
  bool identical_modes = false;

  /// Throws InvalidArgument on negative r or a coefficient matrix of the wrong shape.
  void validate() const;
};

/// Draw interval [0.1 / tau_bar, 2 pi / tau_bar] with tau_bar = max(tau_max, 1).
std::pair<double, double> coefficient_interval(int tau_max);

/// Independent uniform coefficients per mode and delay; with identical_modes
/// one row is drawn and replicated.
Eigen::MatrixXd draw_coefficients(int n_modes, int tau_max, std::uint64_t seed,
                                  bool identical_modes = false);

/// Convenience: config with freshly drawn coefficients.
EncodingConfig make_encoding(int n_modes, double r, int tau_max, std::uint64_t seed,
                             bool identical_modes = false);

Eigen::Matrix2d single_mode_squeezed_cov(double r, double phi);

/// phi_t for every mode; throws InsufficientHistory when t < tau_max.
Eigen::VectorXd phases(const InputSeries& input, const EncodingConfig& cfg, std::size_t t);

/// Block-diagonal product-state covariance at step t.
CovarianceMatrix encode(const InputSeries& input, const EncodingConfig& cfg, std::size_t t);

/// Upper triangles of every single-mode block, 3 per mode: (xx, xp, pp).
/// These are the preprocessing features the Gaussian bound is measured on.
Eigen::VectorXd input_features(const InputSeries& input, const EncodingConfig& cfg, std::size_t t);

}  // namespace ripc
