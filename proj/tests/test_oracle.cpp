#include <doctest.h>

#include <cmath>

#include "ripc/encoding.hpp"
#include "ripc/error.hpp"
#include "ripc/gaussian.hpp"
#include "ripc/oracle.hpp"
#include "ripc/rng.hpp"

using namespace ripc;

TEST_SUITE("oracle") {

TEST_CASE("ladder matrices") {
  const Eigen::MatrixXcd a = annihilation_matrix(5);
  CHECK(a.rows() == 6);
  CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
  const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < 5; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-14);
  const Eigen::MatrixXcd e = embed_mode_operator(a, 1, 2);
  CHECK(e.rows() == 36);
}

TEST_CASE("basis indexing and leakage") {
  FockState s(2, 4);
  CHECK(s.dimension() == 25);
  CHECK(s.occupations(7) == std::vector<int>{1, 2});
  CHECK(s.leakage() == 0.0);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(25);
  amp(0) = 1.0;
  amp(24) = 1.0;
  CHECK(FockState(2, 4, amp).leakage() == doctest::Approx(0.5));
  CHECK(FockState(2, 4, amp).normalized().norm() == doctest::Approx(1.0));
}

TEST_CASE("squeezed vacuum in Fock space") {
  const FockState vac = build_squeezed_vacuum(0.0, 0.3, 10);
  CHECK(std::abs(vac.amplitudes()(0)) == doctest::Approx(1.0));
  const FockState sq = build_squeezed_vacuum(0.5, 0.9, 60);
  for (Eigen::Index n = 1; n < sq.dimension(); n += 2) CHECK(std::abs(sq.amplitudes()(n)) < 1e-14);
  CHECK(mean_photon_number(sq, 0) == doctest::Approx(std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-10));
  const QuadratureMoments q = quadrature_moments(sq);
  CHECK((q.covariance - single_mode_squeezed_cov(0.5, 0.9)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(q.mean.cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(build_squeezed_vacuum(1.5, 0.0, 10), CutoffInsufficient);
}

TEST_CASE("passive network acts as a mode transformation") {
  Philox4x32 rng(4, 0);
  const Eigen::MatrixXcd u = haar_unitary(2, rng);
  const FockState in = product_state({build_squeezed_vacuum(0.3, 0.2, 14), build_squeezed_vacuum(0.2, 1.0, 14)});
  const FockState out = apply_passive_network(in, u);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-8));
  const Eigen::MatrixXd expected =
      propagate(CovarianceMatrix(quadrature_moments(in).covariance), passive_symplectic(u)).matrix();
  CHECK((quadrature_moments(out).covariance - expected).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("heralding") {
  const FockState vac(1, 6);
  CHECK_THROWS_AS(apply_string(vac, OperatorString{{{0, false}}}), HeraldingImpossible);
  const HeraldedState one = apply_string(vac, OperatorString{{{0, true}}});
  CHECK(one.norm == doctest::Approx(1.0));
  CHECK(mean_photon_number(one.state, 0) == doctest::Approx(1.0));
  CHECK(std::abs(expectation(one.state, OperatorString{{{0, true}, {0, false}}}) - 1.0) < 1e-14);
}

TEST_CASE("Wick engine agrees with the Fock simulator at converged cutoffs") {
  const auto rows = run_oracle_checks();
  REQUIRE(!rows.empty());
  std::size_t converged = 0;
  for (const OracleCaseResult& r : rows) {
    if (r.cutoff == 0 || r.cutoff == 2 * kSingleModeCutoff || r.cutoff == 16) {
      INFO(r.name << " cutoff " << r.cutoff << " error " << r.error);
      CHECK(r.passed);
      ++converged;
    }
  }
  CHECK(converged > 10);
}

}  // TEST_SUITE
