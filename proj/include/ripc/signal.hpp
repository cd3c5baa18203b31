#pragma once

// Input streams and the Legendre target basis used to measure capacity.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ripc {

/// Washout / train / test phase lengths in timesteps.
struct Phases {
  std::size_t washout = 0;
  std::size_t train = 0;
  std::size_t test = 0;

  std::size_t total() const noexcept { return washout + train + test; }
  std::size_t train_begin() const noexcept { return washout; }
  std::size_t test_begin() const noexcept { return washout + train; }

  bool operator==(const Phases&) const = default;
};

/// i.i.d. Uniform(-1, 1) input with phase boundaries.
struct InputSeries {
  std::vector<double> values;
  Phases phases;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t t) const { return values[t]; }
};

/// Draws `length` samples; the whole series is marked as train phase.
InputSeries generate_input(std::size_t length, std::uint64_t seed);

/// Draws phases.total() samples with the given phase split.
InputSeries generate_input(const Phases& phases, std::uint64_t seed);

/// Legendre polynomial P_d(x) by Bonnet's recurrence.
double legendre(int degree, double x);

/// sqrt(2d+1) P_d(x): unit second moment under Uniform(-1, 1).
double normalized_legendre(int degree, double x);

/// One factor P_degree(s_{t-delay}) of a basis function.
struct Term {
  int delay = 0;
  int degree = 1;

  bool operator==(const Term&) const = default;
};

/// Product of normalized Legendre factors at pairwise distinct delays.
///
/// Terms are kept sorted by delay. The constant function is never a basis
/// function here; the readout bias covers it.
class BasisFunction {
 public:
  BasisFunction() = default;
  explicit BasisFunction(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  int total_degree() const noexcept;
  int max_delay() const noexcept;
  std::size_t factor_count() const noexcept { return terms_.size(); }
  bool is_cross_term() const noexcept { return terms_.size() >= 2; }

  /// Value at step t of the input stream; requires t >= max_delay().
  double evaluate(const InputSeries& input, std::size_t t) const;

  /// e.g. "P1(t-0)*P2(t-3)".
  std::string label() const;

  bool operator==(const BasisFunction&) const = default;

  /// Canonical order: total degree, factor count, delays, then degrees.
  std::strong_ordering operator<=>(const BasisFunction& other) const;

 private:
  std::vector<Term> terms_;
};

/// Target values for steps [first, last); throws InsufficientHistory when
/// first < b.max_delay() and InvalidArgument when last exceeds the series.
std::vector<double> target_series(const BasisFunction& b, const InputSeries& input,
                                  std::size_t first, std::size_t last);

/// Target values for every step that has full history.
std::vector<double> target_series(const BasisFunction& b, const InputSeries& input);

struct BasisTruncation {
  int max_total_degree = 8;
  int max_delay = 0;
  int max_factors = 3;

  bool operator==(const BasisTruncation&) const = default;
};

/// Every basis function inside the truncation, duplicate-free, in canonical order.
std::vector<BasisFunction> enumerate_basis(int max_total_degree, int max_delay, int max_factors);

inline std::vector<BasisFunction> enumerate_basis(const BasisTruncation& t) {
  return enumerate_basis(t.max_total_degree, t.max_delay, t.max_factors);
}

}  // namespace ripc
