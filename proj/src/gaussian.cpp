#include "ripc/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <fmt/format.h>

#include "ripc/error.hpp"
#include "ripc/rng.hpp"

namespace ripc {

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd s, double tol) : s_(std::move(s)) {
  if (s_.rows() != s_.cols() || s_.rows() % 2 != 0 || s_.rows() == 0)
    throw DimensionMismatch("SymplecticMatrix: expected a nonempty even square matrix");
  const double scale = std::max(1.0, s_.cwiseAbs().maxCoeff() * s_.cwiseAbs().maxCoeff());
  const double residual = symplectic_residual();
  if (residual > tol * scale)
    throw InvalidArgument(fmt::format("SymplecticMatrix: |S Omega S^T - Omega| = {:.3e}", residual));
}

double SymplecticMatrix::symplectic_residual() const {
  const Eigen::MatrixXd omega = symplectic_form(n_modes());
  return (s_ * omega * s_.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& rhs) const {
  if (rhs.s_.rows() != s_.rows()) throw DimensionMismatch("SymplecticMatrix product: size mismatch");
  return SymplecticMatrix(s_ * rhs.s_, 1e-9);
}

CovarianceMatrix::CovarianceMatrix(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0 || sigma.rows() == 0)
    throw DimensionMismatch("CovarianceMatrix: expected a nonempty even square matrix");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw InvalidArgument(fmt::format("CovarianceMatrix: asymmetry {:.3e}", asym));
  sigma_ = 0.5 * (sigma + sigma.transpose());
}

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
  return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

double physicality_margin(const CovarianceMatrix& sigma) {
  const std::complex<double> i(0.0, 1.0);
  const Eigen::MatrixXcd h =
      sigma.matrix().cast<std::complex<double>>() + i * symplectic_form(sigma.n_modes()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_physical(const CovarianceMatrix& sigma, double tol) {
  return physicality_margin(sigma) >= -tol;
}

Eigen::VectorXd symplectic_eigenvalues(const CovarianceMatrix& sigma) {
  const int n = sigma.n_modes();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(n) * sigma.matrix(), false);
  std::vector<double> mags;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k)
    mags.push_back(std::abs(solver.eigenvalues()(k)));
  std::sort(mags.begin(), mags.end());
  Eigen::VectorXd nu(n);
  for (int k = 0; k < n; ++k) nu(k) = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
  return nu;
}

Eigen::MatrixXcd haar_unitary(int n, Philox4x32& rng) {
  Eigen::MatrixXcd z(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      z(r, c) = std::complex<double>(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const std::complex<double> d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= (mag > 0.0) ? d / mag : std::complex<double>(1.0, 0.0);
  }
  return q;
}

SymplecticMatrix passive_symplectic(const Eigen::MatrixXcd& u) {
  const Eigen::Index n = u.rows();
  if (u.cols() != n) throw DimensionMismatch("passive_symplectic: unitary must be square");
  Eigen::MatrixXd s(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = u(j, k).real();
      const double im = u(j, k).imag();
      // x' + i p' = U (x + i p)
      s(2 * j, 2 * k) = re;
      s(2 * j, 2 * k + 1) = -im;
      s(2 * j + 1, 2 * k) = im;
      s(2 * j + 1, 2 * k + 1) = re;
    }
  return SymplecticMatrix(std::move(s));
}

SymplecticMatrix random_passive_symplectic(int n_modes, std::uint64_t seed) {
  if (n_modes < 1) throw InvalidArgument("random_passive_symplectic: n_modes must be >= 1");
  Philox4x32 rng(seed, purpose_tag("network"));
  return passive_symplectic(haar_unitary(n_modes, rng));
}

SymplecticMatrix random_active_symplectic(int n_modes, std::uint64_t seed, double max_squeezing) {
  if (n_modes < 1) throw InvalidArgument("random_active_symplectic: n_modes must be >= 1");
  Philox4x32 rng(seed, purpose_tag("network-active"));
  const SymplecticMatrix first = passive_symplectic(haar_unitary(n_modes, rng));
  const SymplecticMatrix second = passive_symplectic(haar_unitary(n_modes, rng));
  Eigen::MatrixXd squeeze = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    const double r = uniform(rng, 0.0, max_squeezing);
    squeeze(2 * j, 2 * j) = std::exp(-r);
    squeeze(2 * j + 1, 2 * j + 1) = std::exp(r);
  }
  return first * SymplecticMatrix(std::move(squeeze)) * second;
}

CovarianceMatrix propagate(const CovarianceMatrix& sigma, const SymplecticMatrix& s) {
  if (sigma.matrix().rows() != s.matrix().rows())
    throw DimensionMismatch(fmt::format("propagate: covariance is {}x{}, symplectic is {}x{}",
                                        sigma.matrix().rows(), sigma.matrix().cols(),
                                        s.matrix().rows(), s.matrix().cols()));
  const Eigen::MatrixXd out = s.matrix() * sigma.matrix() * s.matrix().transpose();
  return CovarianceMatrix(0.5 * (out + out.transpose()));
}

Eigen::MatrixXd x_submatrix(const CovarianceMatrix& sigma) {
  const int n = sigma.n_modes();
  Eigen::MatrixXd xx(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) xx(j, k) = sigma(2 * j, 2 * k);
  return xx;
}

Eigen::VectorXd upper_triangle(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd out(n * (n + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j; k < n; ++k) out(idx++) = m(j, k);
  return out;
}

Eigen::VectorXd x_features(const CovarianceMatrix& sigma) {
  return upper_triangle(x_submatrix(sigma));
}

Eigen::VectorXd vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows) {
  if (rows <= 0 || v.size() % rows != 0) throw DimensionMismatch("unvec: size not divisible by rows");
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, v.size() / rows);
}

VectorizedReservoir vectorize_gaussian_reservoir(const SymplecticMatrix& s, int n_reservoir_modes,
                                                 int n_input_modes) {
  if (n_reservoir_modes < 1 || n_input_modes < 1 ||
      s.n_modes() != n_reservoir_modes + n_input_modes)
    throw DimensionMismatch(fmt::format(
        "vectorize_gaussian_reservoir: S acts on {} modes, expected {} reservoir + {} input",
        s.n_modes(), n_reservoir_modes, n_input_modes));
  const Eigen::Index r = 2 * n_reservoir_modes;
  const Eigen::Index q = 2 * n_input_modes;
  VectorizedReservoir out;
  out.reservoir_block = s.matrix().topLeftCorner(r, r);
  out.input_block = s.matrix().topRightCorner(r, q);
  out.A = Eigen::kroneckerProduct(out.reservoir_block, out.reservoir_block).eval();
  out.B = Eigen::kroneckerProduct(out.input_block, out.input_block).eval();
  return out;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ripc
