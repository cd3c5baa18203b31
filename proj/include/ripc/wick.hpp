#pragma once

// Moments of de-Gaussified states O rho_G O^dagger / K for a zero-mean
// Gaussian rho_G and a finite ladder-operator string O, evaluated exactly with
// Wick's theorem (sum over perfect matchings of pair contractions).

#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ripc/gaussian.hpp"

namespace ripc {

using Complex = std::complex<double>;

struct Ladder {
  int mode = 0;
  bool dagger = false;

  bool operator==(const Ladder&) const = default;
};

/// Ordered product of ladder operators; ops.front() is the leftmost factor,
/// i.e. it acts last on a ket.
struct OperatorString {
  std::vector<Ladder> ops;

  std::size_t size() const noexcept { return ops.size(); }
  bool empty() const noexcept { return ops.empty(); }

  /// Hermitian conjugate: reversed order, daggers flipped.
  OperatorString adjoint() const;

  /// this * rhs.
  OperatorString operator*(const OperatorString& rhs) const;

  std::string label() const;

  /// n photon subtractions (or additions) on modes 0, 1, 2, ... wrapping
  /// around n_modes.
  static OperatorString photon_ops(int count, bool addition, int n_modes);
};

enum class ContractionKind { AA, AdagAdag, AdagA, AAdag };

/// <a#_j a#_k> of a zero-mean Gaussian state from its covariance blocks.
Complex pair_contraction(const CovarianceMatrix& sigma, int j, int k, ContractionKind kind);

/// All perfect matchings of {0, ..., n-1}; pairs (u, v) have u < v. Emitted in
/// "pair the smallest unmatched index with each later index" order.
std::vector<std::vector<std::pair<int, int>>> perfect_matchings(int n);

/// (n-1)!! for even n, 0 for odd n.
std::uint64_t matching_count(int n);

/// Gaussian moment engine bound to one covariance matrix. Sub-moments are
/// memoized per instance, so an instance must not be shared across threads.
class WickEvaluator {
 public:
  explicit WickEvaluator(const CovarianceMatrix& sigma);

  /// Tr[b_1 ... b_n rho_G].
  Complex moment(const OperatorString& string);

  /// Same value by explicit summation over perfect_matchings(); no memo.
  Complex moment_by_enumeration(const OperatorString& string) const;

  Complex contraction(const Ladder& left, const Ladder& right) const;

  int n_modes() const noexcept { return n_modes_; }
  std::size_t cache_size() const noexcept { return cache_.size(); }

 private:
  Complex moment_of(const std::vector<Ladder>& ops);

  int n_modes_;
  Eigen::MatrixXcd aa_, adag_adag_, adag_a_, a_adag_;
  std::unordered_map<std::uint64_t, Complex> cache_;
};

/// Wrapper for a one-off moment.
Complex gaussian_moment(const OperatorString& string, const CovarianceMatrix& sigma);

struct WickOptions {
  std::size_t max_string_length = 4;
  double min_norm = 1e-12;           // below: HeraldingImpossible
  double max_imaginary_residue = 1e-9;
};

struct DeGaussifiedState {
  Eigen::VectorXd mean;        // (<x1>, <p1>, ...), zero for zero-mean input
  CovarianceMatrix covariance;
  double norm;                 // K = <O^dagger O>
};

/// Mean and symmetrized covariance of O rho_G O^dagger / K. Throws
/// HeraldingImpossible when K <= options.min_norm, NumericalError on
/// imaginary residues, InvalidArgument for strings longer than the cap or
/// with out-of-range modes.
DeGaussifiedState degaussify_covariance(const CovarianceMatrix& sigma, const OperatorString& string,
                                        const WickOptions& options = {});

/// x-x block only; same contract as degaussify_covariance but skips the p
/// quadratures (the readout path).
Eigen::MatrixXd degaussify_x_block(const CovarianceMatrix& sigma, const OperatorString& string,
                                   const WickOptions& options = {});

}  // namespace ripc
