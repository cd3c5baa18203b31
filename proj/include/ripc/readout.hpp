#pragma once

// Optimal linear readout and information processing capacity.

#include <cstddef>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ripc/encoding.hpp"
#include "ripc/signal.hpp"

namespace ripc {

struct ReadoutWeights {
  Eigen::VectorXd w;
  double w0 = 0.0;
};

inline constexpr double kRankEpsilon = 1e-10;

/// Minimum-norm least squares on [X 1] via a truncated SVD, computed once
/// and reused for any number of targets. Singular values below
/// rank_epsilon * (largest singular value) are discarded.
class LeastSquaresReadout {
 public:
  explicit LeastSquaresReadout(const Eigen::MatrixXd& x_train, double rank_epsilon = kRankEpsilon);

  ReadoutWeights fit(const Eigen::VectorXd& target) const;

  /// Rank of the bias-augmented design matrix.
  Eigen::Index rank() const noexcept { return u_.cols(); }

  /// Independent non-constant directions: rank() - 1, floored at 0.
  Eigen::Index feature_rank() const noexcept { return rank() > 0 ? rank() - 1 : 0; }

  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index features() const noexcept { return features_; }

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index features_ = 0;
  Eigen::MatrixXd u_;        // rows x rank
  Eigen::VectorXd inv_s_;    // rank
  Eigen::MatrixXd v_;        // (features + 1) x rank
};

/// One-shot training; the bias column is appended internally.
ReadoutWeights train(const Eigen::MatrixXd& x, const Eigen::VectorXd& target);

Eigen::VectorXd predict(const Eigen::MatrixXd& x, const ReadoutWeights& weights);

/// sum (target - output)^2 / sum target^2. Throws InvalidArgument for a zero target.
double nmse(const Eigen::VectorXd& target, const Eigen::VectorXd& output);

/// clamp(1 - NMSE_test, 0, 1) after training on the train phase.
double capacity(const Eigen::MatrixXd& x_train, const Eigen::MatrixXd& x_test,
                const Eigen::VectorXd& target_train, const Eigen::VectorXd& target_test);

/// chi^2_dof quantile at 1 - p, divided by samples. p = 1 gives 0.
double threshold_value(std::size_t samples, std::size_t dof, double p);

/// raw if raw > threshold_value(samples, dof, p), else 0.
double threshold(double raw, std::size_t samples, std::size_t dof, double p);

struct BasisCapacity {
  BasisFunction basis;
  double raw = 0.0;
  double thresholded = 0.0;
};

struct CapacityReport {
  std::vector<BasisCapacity> per_basis;
  double total = 0.0;                 // sum of thresholded capacities
  std::map<int, double> per_delay;    // single-factor functions only
  std::map<int, double> per_degree;   // by total degree, all functions
  double cross_term_total = 0.0;
  std::size_t cross_term_count = 0;   // number of cross-term basis functions

  double threshold = 0.0;
  double p = 1e-10;
  std::size_t train_length = 0;
  std::size_t test_length = 0;
  std::size_t feature_count = 0;
  std::size_t dof = 0;                // feature rank used for the threshold
};

/// Capacities of every basis function for a feature stream whose row t is
/// the feature vector at input step t (rows before the train phase are
/// ignored). Throws InsufficientHistory when the washout is shorter than the
/// largest basis delay.
CapacityReport ipc_suite(const Eigen::MatrixXd& features, const InputSeries& input,
                         const std::vector<BasisFunction>& basis, double p);

/// Encoded-input features (3 per mode) for every step; rows before
/// tau_max are zero.
Eigen::MatrixXd input_feature_matrix(const InputSeries& input, const EncodingConfig& cfg);

/// IPC of the encoded-input covariance entries alone: the Gaussian bound.
CapacityReport gaussian_bound_report(const EncodingConfig& cfg, const InputSeries& input,
                                     const std::vector<BasisFunction>& basis, double p);

double gaussian_bound(const EncodingConfig& cfg, const InputSeries& input,
                      const std::vector<BasisFunction>& basis, double p);

/// Observed capacity minus the Gaussian bound; positive values witness
/// non-Gaussian processing.
inline double excess_capacity(double total, double bound) { return total - bound; }

}  // namespace ripc
