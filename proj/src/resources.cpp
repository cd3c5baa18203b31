#include "ripc/resources.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include "ripc/error.hpp"
#include "ripc/gaussian.hpp"

namespace ripc {

void SamplingConfig::validate(int dimension) const {
  if (!enabled) return;
  if (!(ensemble_size >= dimension + 2.0))
    throw InvalidArgument(fmt::format("ensemble size {} is below m + 2 = {}", ensemble_size, dimension + 2));
}

Eigen::MatrixXd wishart_sample(const Eigen::MatrixXd& sigma, double ensemble_size, Philox4x32& rng) {
  const Eigen::Index m = sigma.rows();
  if (sigma.cols() != m || m == 0) throw DimensionMismatch("wishart_sample: scale matrix must be square");
  if (!(ensemble_size >= static_cast<double>(m) + 2.0))
    throw InvalidArgument(fmt::format("wishart_sample: M = {} < m + 2 = {}", ensemble_size, m + 2));
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("wishart_sample: scale matrix is not positive definite");

  const double dof = ensemble_size - 1.0;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, i) = std::sqrt(chi_squared(rng, dof - static_cast<double>(i)));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = standard_normal(rng);
  }
  const Eigen::MatrixXd la = llt.matrixL() * a;
  const Eigen::MatrixXd out = (la * la.transpose()) / dof;
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd wishart_sample(const Eigen::MatrixXd& sigma, double ensemble_size, std::uint64_t seed) {
  Philox4x32 rng(seed, purpose_tag("wishart"));
  return wishart_sample(sigma, ensemble_size, rng);
}

Eigen::VectorXd noisy_features(const Eigen::MatrixXd& x_block, double ensemble_size, Philox4x32& rng,
                               bool* regularized) {
  if (regularized) *regularized = false;
  try {
    return upper_triangle(wishart_sample(x_block, ensemble_size, rng));
  } catch (const NotPositiveDefinite&) {
    if (regularized) *regularized = true;
    const Eigen::MatrixXd shifted =
        x_block + 1e-10 * Eigen::MatrixXd::Identity(x_block.rows(), x_block.cols());
    return upper_triangle(wishart_sample(shifted, ensemble_size, rng));
  }
}

}  // namespace ripc
