#include <doctest.h>

#include <cmath>

#include "ripc/error.hpp"
#include "ripc/reservoir.hpp"
#include "ripc/rng.hpp"

using namespace ripc;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Philox4x32 rng(seed, 0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
  return m;
}

Eigen::MatrixXd contraction(Eigen::Index n, std::uint64_t seed, double radius) {
  Eigen::MatrixXd a = random_matrix(n, n, seed);
  return a * (radius / spectral_radius(a));
}

double rank_of(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return static_cast<double>((s.array() > 1e-9 * s(0)).count());
}

SchemeConfig scheme(SchemeKind kind, int n, int tau, int ops) {
  SchemeConfig cfg;
  cfg.kind = kind;
  cfg.n_modes = n;
  cfg.tau_max = tau;
  cfg.n_photon_ops = ops;
  if (kind == SchemeKind::QrcLeaky) cfg.leak_vector = draw_leak_vector(n * (n + 1) / 2, 3);
  return cfg;
}

}  // namespace

TEST_SUITE("reservoir") {

TEST_CASE("run_linear matches the unrolled sum") {
  const Eigen::MatrixXd a = contraction(4, 1, 0.8);
  const Eigen::MatrixXd b = random_matrix(4, 2, 2);
  const Eigen::VectorXd x0 = random_matrix(4, 1, 3);
  const Eigen::MatrixXd g = random_matrix(30, 2, 4);
  const Eigen::MatrixXd out = run_linear(LinearReservoir(a, b, x0), g);
  for (Eigen::Index t = 0; t < g.rows(); ++t) {
    Eigen::VectorXd x = x0;
    for (Eigen::Index k = 0; k <= t; ++k) x = a * x;
    Eigen::MatrixXd ak = Eigen::MatrixXd::Identity(4, 4);
    for (Eigen::Index k = 0; k <= t; ++k) {
      x += ak * b * g.row(t - k).transpose();
      ak = a * ak;
    }
    CHECK((out.row(t).transpose() - x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("zero dynamics is memoryless") {
  const Eigen::MatrixXd b = random_matrix(3, 2, 5);
  const Eigen::MatrixXd g = random_matrix(10, 2, 6);
  const Eigen::MatrixXd out = run_linear(LinearReservoir(Eigen::MatrixXd::Zero(3, 3), b, Eigen::VectorXd::Ones(3)), g);
  CHECK((out - g * b.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fading memory forgets the initial state") {
  const Eigen::MatrixXd a = contraction(3, 7, 0.5);
  const Eigen::MatrixXd b = random_matrix(3, 1, 8);
  const Eigen::MatrixXd g = random_matrix(80, 1, 9);
  const Eigen::MatrixXd u = run_linear(LinearReservoir(a, b, Eigen::VectorXd::Zero(3)), g);
  const Eigen::MatrixXd v = run_linear(LinearReservoir(a, b, 10.0 * Eigen::VectorXd::Ones(3)), g);
  CHECK((u.row(79) - v.row(79)).norm() < 1e-12);
  CHECK_THROWS_AS(LinearReservoir(contraction(3, 7, 1.2), b, Eigen::VectorXd::Zero(3)), InvalidArgument);
  CHECK_NOTHROW(LinearReservoir(contraction(3, 7, 1.2), b, Eigen::VectorXd::Zero(3), false));
  CHECK_THROWS_AS(LinearReservoir(a, random_matrix(2, 1, 1), Eigen::VectorXd::Zero(3)), DimensionMismatch);
}

TEST_CASE("affine augmentation reproduces the affine system") {
  const Eigen::MatrixXd a = contraction(3, 11, 0.7);
  const Eigen::MatrixXd b = random_matrix(3, 2, 12);
  const Eigen::VectorXd c = random_matrix(3, 1, 13);
  const Eigen::VectorXd x0 = random_matrix(3, 1, 14);
  const Eigen::MatrixXd g = random_matrix(40, 2, 15);
  const AugmentedSystem aug = affine_augment(a, b, c);
  Eigen::MatrixXd g1(40, 3);
  g1 << g, Eigen::VectorXd::Ones(40);
  Eigen::VectorXd x0a(4);
  x0a << x0, 1.0;
  const Eigen::MatrixXd out = run_linear(LinearReservoir(aug.A, aug.B, x0a, false), g1);
  Eigen::VectorXd x = x0;
  for (Eigen::Index t = 0; t < 40; ++t) {
    x = a * x + b * g.row(t).transpose() + c;
    CHECK((out.row(t).head(3).transpose() - x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(out(t, 3) == 1.0);
  }
}

TEST_CASE("leaky memory limits") {
  const Eigen::MatrixXd x = random_matrix(20, 6, 21);
  const Eigen::VectorXd v = draw_leak_vector(6, 4);
  CHECK(v.minCoeff() >= 0.0);
  CHECK(v.maxCoeff() <= 1.0);
  for (LeakMode mode : {LeakMode::Broadcast, LeakMode::Elementwise}) {
    CHECK(leaky_memory(x, 0.0, v, mode) == x);
    CHECK(leaky_memory(x, 1.0, v, mode).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(leaky_memory(x, 1.5, v), InvalidArgument);
  CHECK_THROWS_AS(leaky_memory(x, 0.5, draw_leak_vector(5, 4)), DimensionMismatch);
}

TEST_CASE("leaky memory recursions by hand") {
  const Eigen::MatrixXd x = random_matrix(5, 3, 22);
  const Eigen::VectorXd v = draw_leak_vector(3, 5);
  const double rho = 0.3;
  const Eigen::MatrixXd b = leaky_memory(x, rho, v, LeakMode::Broadcast);
  const Eigen::MatrixXd e = leaky_memory(x, rho, v, LeakMode::Elementwise);
  Eigen::VectorXd ob = (1 - rho) * x.row(0).transpose(), oe = ob;
  for (Eigen::Index t = 1; t < 5; ++t) {
    ob = rho * v.dot(ob) * Eigen::VectorXd::Ones(3) + (1 - rho) * x.row(t).transpose();
    oe = rho * v.cwiseProduct(oe) + (1 - rho) * x.row(t).transpose();
    CHECK((b.row(t).transpose() - ob).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((e.row(t).transpose() - oe).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("small leak rates perturb the stream by O(rho)") {
  const Eigen::MatrixXd x = random_matrix(200, 6, 23);
  const Eigen::VectorXd v = draw_leak_vector(6, 6);
  const double xmax = x.cwiseAbs().maxCoeff();
  for (double rho : {1e-3, 1e-2, 0.1}) {
    const double gain = rho * v.sum();
    REQUIRE(gain < 1.0);
    const double omax = (1 - rho) * xmax / (1 - gain);
    const Eigen::MatrixXd o = leaky_memory(x, rho, v);
    CHECK(o.cwiseAbs().maxCoeff() <= omax + 1e-12);
    CHECK((o - x).cwiseAbs().maxCoeff() <= rho * xmax + gain * omax + 1e-12);
  }
}

TEST_CASE("scheme validation") {
  CHECK_THROWS_AS(scheme(SchemeKind::Qelm, 2, 1, 0).validate(), InvalidArgument);
  CHECK_THROWS_AS(scheme(SchemeKind::QrcLeaky, 2, 1, 0).validate(), InvalidArgument);
  CHECK_NOTHROW(scheme(SchemeKind::QrcPreprocessing, 2, 3, 0).validate());
  CHECK_THROWS_AS(scheme(SchemeKind::Qelm, 2, 0, 5).validate(), InvalidArgument);
  SchemeConfig leaky = scheme(SchemeKind::QrcLeaky, 3, 0, 0);
  leaky.leak_vector = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(leaky.validate(), DimensionMismatch);
  CHECK(scheme(SchemeKind::Qelm, 2, 0, 3).photon_string().label() == "a1a2a1");
}

TEST_CASE("memoryless and finite-window schemes") {
  const int n = 2;
  InputSeries in = generate_input(30, 41);
  const SymplecticMatrix net = random_passive_symplectic(n, 41);

  for (int ops : {0, 1}) {
    const EncodingConfig e0 = make_encoding(n, 0.75, 0, 41);
    const SchemeOutput base = run_scheme(scheme(SchemeKind::Qelm, n, 0, ops), e0, net, in);
    InputSeries poked = in;
    poked.values[14] += 0.3;
    const SchemeOutput moved = run_scheme(scheme(SchemeKind::Qelm, n, 0, ops), e0, net, poked);
    for (Eigen::Index t = 0; t < 30; ++t)
      CHECK(((base.features.row(t) - moved.features.row(t)).norm() > 1e-9) == (t == 14));

    const EncodingConfig e2 = make_encoding(n, 0.75, 2, 41);
    const SchemeOutput win = run_scheme(scheme(SchemeKind::QrcPreprocessing, n, 2, ops), e2, net, in);
    const SchemeOutput win_moved = run_scheme(scheme(SchemeKind::QrcPreprocessing, n, 2, ops), e2, net, poked);
    CHECK(win.first_valid_step == 2);
    CHECK(win.features.topRows(2).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index t = 2; t < 30; ++t)
      CHECK(((win.features.row(t) - win_moved.features.row(t)).norm() > 1e-9) == (t >= 14 && t <= 16));
  }
}

TEST_CASE("leaky scheme carries information forward") {
  const int n = 2;
  InputSeries in = generate_input(30, 42);
  const SymplecticMatrix net = random_passive_symplectic(n, 42);
  const EncodingConfig enc = make_encoding(n, 0.75, 0, 42);
  SchemeConfig cfg = scheme(SchemeKind::QrcLeaky, n, 0, 0);
  cfg.rho = 0.2;
  InputSeries poked = in;
  poked.values[10] += 0.3;
  const SchemeOutput a = run_scheme(cfg, enc, net, in);
  const SchemeOutput b = run_scheme(cfg, enc, net, poked);
  CHECK((a.features.row(9) - b.features.row(9)).norm() == 0.0);
  CHECK((a.features.row(12) - b.features.row(12)).norm() > 1e-9);
}

TEST_CASE("feature rank never exceeds N(N+1)/2") {
  for (int n : {1, 2, 3}) {
    const InputSeries in = generate_input(200, 50 + n);
    const SchemeOutput out = run_scheme(scheme(SchemeKind::Qelm, n, 0, 1), make_encoding(n, 0.75, 0, 50 + n),
                                        random_passive_symplectic(n, 50 + n), in);
    CHECK(out.features.cols() == n * (n + 1) / 2);
    CHECK(rank_of(out.features) <= n * (n + 1) / 2);
  }
}

TEST_CASE("phase split") {
  const Eigen::MatrixXd f = random_matrix(10, 2, 60);
  const PhaseSplit s = split_phases(f, Phases{2, 5, 3});
  CHECK(s.washout.rows() == 2);
  CHECK(s.train.row(0) == f.row(2));
  CHECK(s.test.row(2) == f.row(9));
  CHECK_THROWS_AS(split_phases(f, Phases{2, 5, 4}), DimensionMismatch);
}

}  // TEST_SUITE
