#pragma once

// Brute-force truncated Fock-space simulator for up to three modes. It shares
// no code path with the Wick engine and serves as its ground truth.
//
// Basis ordering: mode 0 is the most significant digit, so the amplitude of
// |n_0, n_1, ...> sits at index sum_k n_k (cutoff + 1)^(N - 1 - k).

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ripc/wick.hpp"

namespace ripc {

class FockState {
 public:
  /// Vacuum on n_modes modes, occupations 0..cutoff per mode.
  FockState(int n_modes, int cutoff);
  FockState(int n_modes, int cutoff, Eigen::VectorXcd amplitudes);

  int n_modes() const noexcept { return n_modes_; }
  int cutoff() const noexcept { return cutoff_; }
  Eigen::Index dimension() const noexcept { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  FockState normalized() const;

  /// Probability weight on states where some mode holds more than cutoff - 2
  /// photons, relative to the total weight.
  double leakage() const;

  /// Occupation numbers of basis index `index`.
  std::vector<int> occupations(Eigen::Index index) const;

 private:
  int n_modes_;
  int cutoff_;
  Eigen::VectorXcd amplitudes_;
};

/// Truncated single-mode annihilation matrix, a|n> = sqrt(n)|n-1>.
Eigen::MatrixXcd annihilation_matrix(int cutoff);

/// Embeds a single-mode operator on `mode` of an n_modes register.
Eigen::MatrixXcd embed_mode_operator(const Eigen::MatrixXcd& single, int mode, int n_modes);

/// exp of the truncated generator (xi* a^2 - xi a^dagger^2) / 2 applied to
/// vacuum, with xi = -r e^{i phi} so the covariance equals
/// single_mode_squeezed_cov(r, phi). Throws CutoffInsufficient when the
/// leakage exceeds max_leakage.
FockState build_squeezed_vacuum(double r, double phi, int cutoff, double max_leakage = 1e-6);

/// Tensor product in the given mode order; all factors share one cutoff.
FockState product_state(const std::vector<FockState>& factors);

/// Applies Gamma(U) = exp(sum_jk (log U)_jk a_j^dagger a_k), the unitary with
/// Gamma^dagger a Gamma = U a.
FockState apply_passive_network(const FockState& state, const Eigen::MatrixXcd& unitary);

/// Unnormalized action of one ladder operator.
FockState apply_ladder(const FockState& state, const Ladder& op);

struct HeraldedState {
  FockState state;  // normalized O|psi> / sqrt(K)
  double norm;      // K = <psi|O^dagger O|psi> for normalized |psi>
};

/// Throws HeraldingImpossible when K <= min_norm.
HeraldedState apply_string(const FockState& state, const OperatorString& string, double min_norm = 1e-12);

/// <psi|O|psi> / <psi|psi>.
Complex expectation(const FockState& state, const OperatorString& string);

double mean_photon_number(const FockState& state, int mode);

struct QuadratureMoments {
  Eigen::VectorXd mean;        // (<x1>, <p1>, ...)
  Eigen::MatrixXd covariance;  // symmetrized, mean-subtracted
};

QuadratureMoments quadrature_moments(const FockState& state);

inline constexpr int kSingleModeCutoff = 40;
inline constexpr int kTwoModeCutoff = 14;

struct OracleCaseResult {
  std::string name;
  int cutoff = 0;  // 0 for cases without a Fock register
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Every Wick-versus-Fock comparison behind the `oracle-check` subcommand:
/// first at the reference cutoffs (40 single mode, 14 two modes), then at
/// doubled single-mode and 16 two-mode cutoffs.
std::vector<OracleCaseResult> run_oracle_checks();

}  // namespace ripc
