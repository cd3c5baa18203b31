#include <doctest.h>

#include <cmath>

#include "ripc/error.hpp"
#include "ripc/resources.hpp"

using namespace ripc;

namespace {

Eigen::Matrix3d reference_sigma() {
  Eigen::Matrix3d s;
  s << 2.0, 0.4, -0.3, 0.4, 1.5, 0.2, -0.3, 0.2, 0.8;
  return s;
}

}  // namespace

TEST_SUITE("resources") {

TEST_CASE("sample covariance mean and variance") {
  const Eigen::Matrix3d sigma = reference_sigma();
  const double m = 50;
  const int trials = 20000;
  Philox4x32 rng(77, 0);
  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero(), sum2 = Eigen::Matrix3d::Zero();
  for (int i = 0; i < trials; ++i) {
    const Eigen::MatrixXd d = wishart_sample(sigma, m, rng);
    sum += d;
    sum2 += d.cwiseProduct(d);
  }
  const Eigen::Matrix3d mean = sum / trials;
  const Eigen::Matrix3d var = sum2 / trials - mean.cwiseProduct(mean);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // Wishart: Var(Sigma_hat_ij) = (Sigma_ij^2 + Sigma_ii Sigma_jj) / (M - 1).
      const double v = (sigma(i, j) * sigma(i, j) + sigma(i, i) * sigma(j, j)) / (m - 1);
      CHECK(std::abs(mean(i, j) - sigma(i, j)) < 4 * std::sqrt(v / trials));
      CHECK(var(i, j) == doctest::Approx(v).epsilon(0.05));
    }
  CHECK(var(0, 0) == doctest::Approx(2 * sigma(0, 0) * sigma(0, 0) / (m - 1)).epsilon(0.05));
}

TEST_CASE("draws are positive definite and symmetric") {
  Philox4x32 rng(3, 0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::MatrixXd d = wishart_sample(reference_sigma(), 5, rng);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(d).info() == Eigen::Success);
  }
}

TEST_CASE("large ensembles approach the exact covariance") {
  const Eigen::MatrixXd d = wishart_sample(reference_sigma(), 1e8, std::uint64_t{5});
  CHECK((d - reference_sigma()).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("determinism") {
  CHECK(wishart_sample(reference_sigma(), 100, std::uint64_t{9}) ==
        wishart_sample(reference_sigma(), 100, std::uint64_t{9}));
  CHECK(wishart_sample(reference_sigma(), 100, std::uint64_t{9}) !=
        wishart_sample(reference_sigma(), 100, std::uint64_t{10}));
}

TEST_CASE("noisy features") {
  Philox4x32 rng(11, 0);
  bool reg = true;
  const Eigen::VectorXd f = noisy_features(reference_sigma(), 1e8, rng, &reg);
  REQUIRE(f.size() == 6);
  CHECK_FALSE(reg);
  CHECK(f(0) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(f(1) == doctest::Approx(0.4).epsilon(1e-2));
  CHECK(f(5) == doctest::Approx(0.8).epsilon(1e-3));
}

TEST_CASE("invalid inputs") {
  SamplingConfig cfg;
  cfg.enabled = true;
  cfg.ensemble_size = 4;
  CHECK_THROWS_AS(cfg.validate(3), InvalidArgument);
  cfg.ensemble_size = 5;
  CHECK_NOTHROW(cfg.validate(3));
  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(wishart_sample(indefinite, 10, std::uint64_t{1}), NotPositiveDefinite);
}

}  // TEST_SUITE
