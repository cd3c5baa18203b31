#include "ripc/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ripc/error.hpp"
#include "ripc/rng.hpp"

namespace ripc {

void EncodingConfig::validate() const {
  if (n_modes < 1) throw InvalidArgument("EncodingConfig: n_modes must be >= 1");
  if (!(r >= 0.0)) throw InvalidArgument("EncodingConfig: squeezing magnitude must be >= 0");
  if (tau_max < 0) throw InvalidArgument("EncodingConfig: tau_max must be >= 0");
  if (coefficients.rows() != n_modes || coefficients.cols() != tau_max + 1)
    throw DimensionMismatch(fmt::format("EncodingConfig: coefficients are {}x{}, expected {}x{}",
                                        coefficients.rows(), coefficients.cols(), n_modes,
                                        tau_max + 1));
}

std::pair<double, double> coefficient_interval(int tau_max) {
  const double tau_bar = std::max(tau_max, 1);
  return {0.1 / tau_bar, 2.0 * std::numbers::pi / tau_bar};
}

Eigen::MatrixXd draw_coefficients(int n_modes, int tau_max, std::uint64_t seed,
                                  bool identical_modes) {
  if (n_modes < 1) throw InvalidArgument("draw_coefficients: n_modes must be >= 1");
  if (tau_max < 0) throw InvalidArgument("draw_coefficients: tau_max must be >= 0");
  const auto [lo, hi] = coefficient_interval(tau_max);
  Philox4x32 rng(seed, purpose_tag("coefficients"));
  Eigen::MatrixXd c(n_modes, tau_max + 1);
  for (int j = 0; j < n_modes; ++j)
    for (int tau = 0; tau <= tau_max; ++tau)
      c(j, tau) = (identical_modes && j > 0) ? c(0, tau) : uniform(rng, lo, hi);
  return c;
}

EncodingConfig make_encoding(int n_modes, double r, int tau_max, std::uint64_t seed,
                             bool identical_modes) {
  EncodingConfig cfg;
  cfg.n_modes = n_modes;
  cfg.r = r;
  cfg.tau_max = tau_max;
  cfg.identical_modes = identical_modes;
  cfg.coefficients = draw_coefficients(n_modes, tau_max, seed, identical_modes);
  cfg.validate();
  return cfg;
}

Eigen::Matrix2d single_mode_squeezed_cov(double r, double phi) {
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  // Closed form of R(phi/2) diag(e^{2r}, e^{-2r}) R(phi/2)^T.
  Eigen::Matrix2d m;
  m << ch + sh * c, sh * s, sh * s, ch - sh * c;
  return m;
}

Eigen::VectorXd phases(const InputSeries& input, const EncodingConfig& cfg, std::size_t t) {
  if (t < static_cast<std::size_t>(cfg.tau_max))
    throw InsufficientHistory(
        fmt::format("encode: step {} lacks the {} steps of history the encoding needs", t, cfg.tau_max));
  if (t >= input.size()) throw InvalidArgument("encode: step beyond the end of the input");
  Eigen::VectorXd window(cfg.tau_max + 1);
  for (int tau = 0; tau <= cfg.tau_max; ++tau) window(tau) = input[t - tau];
  return cfg.coefficients * window;
}

CovarianceMatrix encode(const InputSeries& input, const EncodingConfig& cfg, std::size_t t) {
  const Eigen::VectorXd phi = phases(input, cfg, t);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * cfg.n_modes, 2 * cfg.n_modes);
  for (int j = 0; j < cfg.n_modes; ++j)
    sigma.block<2, 2>(2 * j, 2 * j) = single_mode_squeezed_cov(cfg.r, phi(j));
  return CovarianceMatrix(sigma);
}

Eigen::VectorXd input_features(const InputSeries& input, const EncodingConfig& cfg, std::size_t t) {
  const Eigen::VectorXd phi = phases(input, cfg, t);
  Eigen::VectorXd out(3 * cfg.n_modes);
  for (int j = 0; j < cfg.n_modes; ++j) {
    const Eigen::Matrix2d block = single_mode_squeezed_cov(cfg.r, phi(j));
    out(3 * j) = block(0, 0);
    out(3 * j + 1) = block(0, 1);
    out(3 * j + 2) = block(1, 1);
  }
  return out;
}

}  // namespace ripc
