#pragma once

// Symplectic linear algebra for N bosonic modes.
//
// Quadratures are ordered (x1, p1, x2, p2, ...) with x = a + a^dagger and
// p = (a - a^dagger)/i, so the vacuum covariance is the identity and the
// symplectic form is the block diagonal of [[0, 1], [-1, 0]].

#include <cstdint>

#include <Eigen/Dense>

namespace ripc {

class Philox4x32;

Eigen::MatrixXd symplectic_form(int n_modes);

/// Real 2N x 2N matrix with S Omega S^T = Omega.
class SymplecticMatrix {
 public:
  /// Throws InvalidArgument if the symplectic condition fails beyond `tol`
  /// (scaled by max(1, |S|_max^2)).
  explicit SymplecticMatrix(Eigen::MatrixXd s, double tol = 1e-10);

  const Eigen::MatrixXd& matrix() const noexcept { return s_; }
  int n_modes() const noexcept { return static_cast<int>(s_.rows() / 2); }

  /// max |S Omega S^T - Omega|.
  double symplectic_residual() const;

  SymplecticMatrix operator*(const SymplecticMatrix& rhs) const;

 private:
  Eigen::MatrixXd s_;
};

/// Real symmetric 2N x 2N quadrature covariance in units of vacuum variance.
class CovarianceMatrix {
 public:
  /// Requires an even square matrix, symmetric to 1e-12 relative; stores the
  /// exactly symmetrized value.
  explicit CovarianceMatrix(const Eigen::MatrixXd& sigma);

  static CovarianceMatrix vacuum(int n_modes);

  const Eigen::MatrixXd& matrix() const noexcept { return sigma_; }
  int n_modes() const noexcept { return static_cast<int>(sigma_.rows() / 2); }
  double operator()(Eigen::Index m, Eigen::Index n) const { return sigma_(m, n); }

 private:
  Eigen::MatrixXd sigma_;
};

/// Smallest eigenvalue of the Hermitian matrix sigma + i Omega.
double physicality_margin(const CovarianceMatrix& sigma);

/// sigma + i Omega >= -tol.
bool is_physical(const CovarianceMatrix& sigma, double tol = 1e-8);

/// Williamson spectrum (each value >= 1 for physical states, == 1 for pure).
Eigen::VectorXd symplectic_eigenvalues(const CovarianceMatrix& sigma);

/// Haar-random N x N unitary (QR of a complex Ginibre matrix, phases fixed).
Eigen::MatrixXcd haar_unitary(int n, Philox4x32& rng);

/// Real embedding of the mode transformation a -> U a.
SymplecticMatrix passive_symplectic(const Eigen::MatrixXcd& unitary);

/// Orthogonal symplectic matrix from a Haar-random interferometer.
SymplecticMatrix random_passive_symplectic(int n_modes, std::uint64_t seed);

/// Interferometer, single-mode squeezers with magnitudes in [0, max_squeezing],
/// interferometer. Not energy preserving.
SymplecticMatrix random_active_symplectic(int n_modes, std::uint64_t seed,
                                          double max_squeezing = 0.5);

/// S sigma S^T.
CovarianceMatrix propagate(const CovarianceMatrix& sigma, const SymplecticMatrix& s);

/// N x N block of x-x covariances.
Eigen::MatrixXd x_submatrix(const CovarianceMatrix& sigma);

/// Row-major upper triangle (diagonal included) of a square matrix.
Eigen::VectorXd upper_triangle(const Eigen::MatrixXd& m);

/// Upper triangle of the x-x block: N(N+1)/2 readout features.
Eigen::VectorXd x_features(const CovarianceMatrix& sigma);

/// Column-major vec(.) and its inverse.
Eigen::VectorXd vec(const Eigen::MatrixXd& m);
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows);

/// Linear recursion vec(sigma_t^R) = A vec(sigma_{t-1}^R) + B vec(sigma_t^in)
/// for a Gaussian reservoir whose first n_reservoir modes are carried over
/// and whose last n_input modes are refreshed with the encoded input.
struct VectorizedReservoir {
  Eigen::MatrixXd reservoir_block;  // M
  Eigen::MatrixXd input_block;      // N
  Eigen::MatrixXd A;                // M (x) M
  Eigen::MatrixXd B;                // N (x) N
};

VectorizedReservoir vectorize_gaussian_reservoir(const SymplecticMatrix& s, int n_reservoir_modes,
                                                 int n_input_modes);

double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace ripc
