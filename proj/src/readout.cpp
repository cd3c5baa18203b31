#include "ripc/readout.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "ripc/error.hpp"

namespace ripc {

LeastSquaresReadout::LeastSquaresReadout(const Eigen::MatrixXd& x_train, double rank_epsilon)
    : rows_(x_train.rows()), features_(x_train.cols()) {
  if (rows_ < 1) throw InvalidArgument("train: at least one sample required");
  Eigen::MatrixXd design(rows_, features_ + 1);
  design.leftCols(features_) = x_train;
  design.col(features_).setOnes();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rank_epsilon * (s.size() > 0 ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  u_ = svd.matrixU().leftCols(r);
  v_ = svd.matrixV().leftCols(r);
  inv_s_ = s.head(r).cwiseInverse();
}

ReadoutWeights LeastSquaresReadout::fit(const Eigen::VectorXd& target) const {
  if (target.size() != rows_)
    throw DimensionMismatch(fmt::format("readout: {} targets for {} samples", target.size(), rows_));
  const Eigen::VectorXd coeffs = v_ * (inv_s_.asDiagonal() * (u_.transpose() * target));
  return {coeffs.head(features_), coeffs(features_)};
}

ReadoutWeights train(const Eigen::MatrixXd& x, const Eigen::VectorXd& target) {
  return LeastSquaresReadout(x).fit(target);
}

Eigen::VectorXd predict(const Eigen::MatrixXd& x, const ReadoutWeights& weights) {
  if (x.cols() != weights.w.size())
    throw DimensionMismatch(fmt::format("predict: {} features, {} weights", x.cols(), weights.w.size()));
  return (x * weights.w).array() + weights.w0;
}

double nmse(const Eigen::VectorXd& target, const Eigen::VectorXd& output) {
  if (target.size() != output.size()) throw DimensionMismatch("nmse: length mismatch");
  const double norm = target.squaredNorm();
  if (!(norm > 0.0)) throw InvalidArgument("nmse: target has zero norm");
  return (target - output).squaredNorm() / norm;
}

namespace {

double capacity_from(const LeastSquaresReadout& readout, const Eigen::MatrixXd& x_test,
                     const Eigen::VectorXd& target_train, const Eigen::VectorXd& target_test) {
  const ReadoutWeights w = readout.fit(target_train);
  const double c = 1.0 - nmse(target_test, predict(x_test, w));
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace

double capacity(const Eigen::MatrixXd& x_train, const Eigen::MatrixXd& x_test,
                const Eigen::VectorXd& target_train, const Eigen::VectorXd& target_test) {
  if (x_train.cols() != x_test.cols()) throw DimensionMismatch("capacity: train/test feature count differs");
  return capacity_from(LeastSquaresReadout(x_train), x_test, target_train, target_test);
}

double threshold_value(std::size_t samples, std::size_t dof, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("threshold: p must lie in (0, 1]");
  if (samples == 0) throw InvalidArgument("threshold: zero samples");
  if (p >= 1.0) return 0.0;
  const boost::math::chi_squared dist(static_cast<double>(std::max<std::size_t>(dof, 1)));
  return boost::math::quantile(boost::math::complement(dist, p)) / static_cast<double>(samples);
}

double threshold(double raw, std::size_t samples, std::size_t dof, double p) {
  return raw > threshold_value(samples, dof, p) ? raw : 0.0;
}

CapacityReport ipc_suite(const Eigen::MatrixXd& features, const InputSeries& input,
                         const std::vector<BasisFunction>& basis, double p) {
  const Phases& ph = input.phases;
  if (static_cast<std::size_t>(features.rows()) != input.size())
    throw DimensionMismatch(
        fmt::format("ipc_suite: {} feature rows for {} input steps", features.rows(), input.size()));
  if (ph.train == 0 || ph.test == 0) throw InvalidArgument("ipc_suite: train and test phases must be nonempty");

  const auto m = features.cols();
  const Eigen::MatrixXd x_train = features.middleRows(ph.train_begin(), ph.train);
  const Eigen::MatrixXd x_test = features.middleRows(ph.test_begin(), ph.test);
  const LeastSquaresReadout readout(x_train);

  CapacityReport report;
  report.p = p;
  report.train_length = ph.train;
  report.test_length = ph.test;
  report.feature_count = static_cast<std::size_t>(m);
  report.dof = static_cast<std::size_t>(readout.feature_rank());
  report.threshold = threshold_value(ph.train, report.dof, p);

  Eigen::VectorXd y_train(ph.train), y_test(ph.test);
  for (const BasisFunction& b : basis) {
    const auto tr = target_series(b, input, ph.train_begin(), ph.test_begin());
    const auto te = target_series(b, input, ph.test_begin(), ph.total());
    y_train = Eigen::Map<const Eigen::VectorXd>(tr.data(), tr.size());
    y_test = Eigen::Map<const Eigen::VectorXd>(te.data(), te.size());

    BasisCapacity c{b, capacity_from(readout, x_test, y_train, y_test), 0.0};
    c.thresholded = c.raw > report.threshold ? c.raw : 0.0;

    report.total += c.thresholded;
    report.per_degree[b.total_degree()] += c.thresholded;
    if (b.is_cross_term()) {
      report.cross_term_total += c.thresholded;
      ++report.cross_term_count;
    } else {
      report.per_delay[b.terms().front().delay] += c.thresholded;
    }
    report.per_basis.push_back(std::move(c));
  }
  return report;
}

Eigen::MatrixXd input_feature_matrix(const InputSeries& input, const EncodingConfig& cfg) {
  cfg.validate();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(input.size()), 3 * cfg.n_modes);
  for (std::size_t t = static_cast<std::size_t>(cfg.tau_max); t < input.size(); ++t)
    out.row(static_cast<Eigen::Index>(t)) = input_features(input, cfg, t).transpose();
  return out;
}

CapacityReport gaussian_bound_report(const EncodingConfig& cfg, const InputSeries& input,
                                     const std::vector<BasisFunction>& basis, double p) {
  if (input.phases.train_begin() < static_cast<std::size_t>(cfg.tau_max))
    throw InsufficientHistory("gaussian_bound: washout shorter than the encoding memory");
  return ipc_suite(input_feature_matrix(input, cfg), input, basis, p);
}

double gaussian_bound(const EncodingConfig& cfg, const InputSeries& input,
                      const std::vector<BasisFunction>& basis, double p) {
  return gaussian_bound_report(cfg, input, basis, p).total;
}

}  // namespace ripc
