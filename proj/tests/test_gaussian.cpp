#include <doctest.h>

#include <cmath>

#include "ripc/encoding.hpp"
#include "ripc/error.hpp"
#include "ripc/gaussian.hpp"
#include "ripc/rng.hpp"

using namespace ripc;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  const Eigen::Index n = a.matrix().rows(), m = b.matrix().rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n + m, n + m);
  out.topLeftCorner(n, n) = a.matrix();
  out.bottomRightCorner(m, m) = b.matrix();
  return CovarianceMatrix(out);
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("symplectic form") {
  const Eigen::MatrixXd omega = symplectic_form(3);
  CHECK(omega.rows() == 6);
  CHECK(omega(0, 1) == 1.0);
  CHECK(omega(1, 0) == -1.0);
  CHECK(max_abs(omega * omega + Eigen::MatrixXd::Identity(6, 6)) == 0.0);
}

TEST_CASE("Haar unitaries are unitary with the right second moment") {
  Philox4x32 rng(123, 0);
  double mean_sq = 0;
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) {
    const Eigen::MatrixXcd u = haar_unitary(4, rng);
    if (i < 20) CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    mean_sq += std::norm(u(1, 2));
  }
  // E|U_jk|^2 = 1/n, Var = (n-1)/(n^2 (n+1)).
  const double se = std::sqrt(3.0 / (16.0 * 5.0) / trials);
  CHECK(std::abs(mean_sq / trials - 0.25) < 5 * se);
}

TEST_CASE("passive networks are orthogonal and symplectic") {
  for (int n : {1, 2, 3, 5}) {
    const SymplecticMatrix s = random_passive_symplectic(n, 40 + n);
    const Eigen::MatrixXd& m = s.matrix();
    CHECK(s.symplectic_residual() < 1e-12);
    CHECK(max_abs(m * m.transpose() - Eigen::MatrixXd::Identity(2 * n, 2 * n)) < 1e-12);
    CHECK(m.determinant() == doctest::Approx(1.0));
  }
  CHECK(random_passive_symplectic(3, 7).matrix() == random_passive_symplectic(3, 7).matrix());
}

TEST_CASE("single-mode phase shift is a rotation") {
  const double theta = 0.37;
  Eigen::MatrixXcd u(1, 1);
  u(0, 0) = std::polar(1.0, theta);
  Eigen::Matrix2d expected;
  expected << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  CHECK(max_abs(passive_symplectic(u).matrix() - expected) < 1e-14);
}

TEST_CASE("active networks are symplectic but not orthogonal") {
  const SymplecticMatrix s = random_active_symplectic(3, 11, 0.5);
  CHECK(s.symplectic_residual() < 1e-10);
  CHECK(max_abs(s.matrix() * s.matrix().transpose() - Eigen::MatrixXd::Identity(6, 6)) > 1e-3);
  CHECK(s.matrix().determinant() == doctest::Approx(1.0));
}

TEST_CASE("group closure and rejection of non-symplectic input") {
  const SymplecticMatrix a = random_active_symplectic(2, 1);
  const SymplecticMatrix b = random_passive_symplectic(2, 2);
  const SymplecticMatrix ab = a * b;
  CHECK(ab.symplectic_residual() < 1e-10);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(SymplecticMatrix{bad}, InvalidArgument);
  CHECK_THROWS_AS(SymplecticMatrix(Eigen::MatrixXd::Identity(3, 3)), InvalidArgument);
}

TEST_CASE("covariance matrices") {
  CHECK(CovarianceMatrix::vacuum(2).matrix() == Eigen::MatrixXd::Identity(4, 4));
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(CovarianceMatrix{asym}, InvalidArgument);
  CHECK(is_physical(CovarianceMatrix::vacuum(3)));
  CHECK(physicality_margin(CovarianceMatrix::vacuum(1)) == doctest::Approx(0.0).scale(1.0));
  CHECK_FALSE(is_physical(CovarianceMatrix(0.5 * Eigen::MatrixXd::Identity(2, 2))));
  const Eigen::VectorXd thermal = symplectic_eigenvalues(CovarianceMatrix(3.0 * Eigen::MatrixXd::Identity(4, 4)));
  CHECK(thermal(0) == doctest::Approx(3.0));
  CHECK(thermal(1) == doctest::Approx(3.0));
}

TEST_CASE("propagation preserves the Williamson spectrum and determinant") {
  const InputSeries in = generate_input(10, 3);
  const EncodingConfig enc = make_encoding(4, 0.75, 0, 2);
  const CovarianceMatrix sigma = encode(in, enc, 5);
  for (const SymplecticMatrix& s : {random_passive_symplectic(4, 9), random_active_symplectic(4, 9)}) {
    const CovarianceMatrix out = propagate(sigma, s);
    CHECK(out.matrix().determinant() == doctest::Approx(sigma.matrix().determinant()).epsilon(1e-9));
    CHECK((symplectic_eigenvalues(out).array() - 1.0).abs().maxCoeff() < 1e-8);
    CHECK(is_physical(out));
  }
  CHECK(max_abs(propagate(sigma, random_passive_symplectic(4, 9)).matrix().trace() * Eigen::MatrixXd::Ones(1, 1) -
                sigma.matrix().trace() * Eigen::MatrixXd::Ones(1, 1)) < 1e-10);
}

TEST_CASE("feature extraction helpers") {
  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  const Eigen::VectorXd u = upper_triangle(m);
  REQUIRE(u.size() == 6);
  CHECK(u(0) == 1);
  CHECK(u(1) == 2);
  CHECK(u(2) == 3);
  CHECK(u(3) == 4);
  CHECK(u(5) == 6);
  CHECK(unvec(vec(m), 3) == m);
  CHECK(vec(m)(1) == 2);

  Eigen::MatrixXd sig = Eigen::MatrixXd::Identity(4, 4);
  sig(0, 2) = sig(2, 0) = 0.3;
  sig(1, 3) = sig(3, 1) = 0.7;
  const Eigen::MatrixXd xx = x_submatrix(CovarianceMatrix(sig));
  CHECK(xx(0, 1) == 0.3);
  CHECK(x_features(CovarianceMatrix(sig)).size() == 3);
}

TEST_CASE("vectorized recursion matches direct propagation") {
  const int nr = 2, ni = 1;
  const SymplecticMatrix s = random_passive_symplectic(nr + ni, 31);
  const VectorizedReservoir v = vectorize_gaussian_reservoir(s, nr, ni);
  CHECK(spectral_radius(v.A) <= 1.0 + 1e-12);

  const InputSeries in = generate_input(25, 8);
  const EncodingConfig enc = make_encoding(ni, 0.75, 0, 8);
  CovarianceMatrix reservoir = CovarianceMatrix::vacuum(nr);
  Eigen::VectorXd state = vec(reservoir.matrix());
  for (std::size_t t = 0; t < in.size(); ++t) {
    const CovarianceMatrix fresh = encode(in, enc, t);
    const CovarianceMatrix joint = propagate(direct_sum(reservoir, fresh), s);
    reservoir = CovarianceMatrix(joint.matrix().topLeftCorner(2 * nr, 2 * nr));
    state = v.A * state + v.B * vec(fresh.matrix());
    CHECK(max_abs(unvec(state, 2 * nr) - reservoir.matrix()) < 1e-10);
  }
  CHECK_THROWS_AS(vectorize_gaussian_reservoir(s, 1, 1), DimensionMismatch);
}

}  // TEST_SUITE
