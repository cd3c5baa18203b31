#include "ripc/wick.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ripc/error.hpp"

namespace ripc {
namespace {

constexpr std::size_t kMaxMemoLength = 10;
constexpr int kMaxMemoMode = 31;

// Six bits per operator plus a four-bit length; only valid for short strings.
bool memo_key(const std::vector<Ladder>& ops, std::uint64_t& key) {
  if (ops.size() > kMaxMemoLength) return false;
  key = ops.size();
  int shift = 4;
  for (const Ladder& op : ops) {
    if (op.mode > kMaxMemoMode) return false;
    key |= static_cast<std::uint64_t>((op.mode << 1) | (op.dagger ? 1 : 0)) << shift;
    shift += 6;
  }
  return true;
}

void check_modes(const OperatorString& s, int n_modes) {
  for (const Ladder& op : s.ops)
    if (op.mode < 0 || op.mode >= n_modes)
      throw InvalidArgument(
          fmt::format("operator string {} addresses mode {} of a {}-mode state", s.label(), op.mode, n_modes));
}

}  // namespace

OperatorString OperatorString::adjoint() const {
  OperatorString out;
  out.ops.reserve(ops.size());
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) out.ops.push_back({it->mode, !it->dagger});
  return out;
}

OperatorString OperatorString::operator*(const OperatorString& rhs) const {
  OperatorString out = *this;
  out.ops.insert(out.ops.end(), rhs.ops.begin(), rhs.ops.end());
  return out;
}

std::string OperatorString::label() const {
  if (ops.empty()) return "I";
  std::string out;
  for (const Ladder& op : ops) out += fmt::format("a{}{}", op.mode + 1, op.dagger ? "^+" : "");
  return out;
}

OperatorString OperatorString::photon_ops(int count, bool addition, int n_modes) {
  if (count < 0) throw InvalidArgument("photon_ops: count must be >= 0");
  if (n_modes < 1) throw InvalidArgument("photon_ops: n_modes must be >= 1");
  OperatorString out;
  for (int i = 0; i < count; ++i) out.ops.push_back({i % n_modes, addition});
  return out;
}

Complex pair_contraction(const CovarianceMatrix& sigma, int j, int k, ContractionKind kind) {
  const int n = sigma.n_modes();
  if (j < 0 || k < 0 || j >= n || k >= n)
    throw InvalidArgument(fmt::format("pair_contraction: modes ({}, {}) outside 0..{}", j, k, n - 1));
  const double xx = sigma(2 * j, 2 * k);
  const double xp = sigma(2 * j, 2 * k + 1);
  const double px = sigma(2 * j + 1, 2 * k);
  const double pp = sigma(2 * j + 1, 2 * k + 1);
  const double delta = (j == k) ? 1.0 : 0.0;
  switch (kind) {
    case ContractionKind::AA:
      return 0.25 * Complex(xx - pp, xp + px);
    case ContractionKind::AdagAdag:
      return 0.25 * Complex(xx - pp, -(xp + px));
    case ContractionKind::AdagA:
      return 0.25 * Complex(xx + pp - 2.0 * delta, xp - px);
    case ContractionKind::AAdag:
      return 0.25 * Complex(xx + pp + 2.0 * delta, -(xp - px));
  }
  return {};
}

std::vector<std::vector<std::pair<int, int>>> perfect_matchings(int n) {
  std::vector<std::vector<std::pair<int, int>>> out;
  if (n < 0 || n % 2 != 0) return out;
  std::vector<std::pair<int, int>> current;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto recurse = [&](auto&& self) -> void {
    int first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) {
      out.push_back(current);
      return;
    }
    used[first] = true;
    for (int v = first + 1; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      current.emplace_back(first, v);
      self(self);
      current.pop_back();
      used[v] = false;
    }
    used[first] = false;
  };
  recurse(recurse);
  return out;
}

std::uint64_t matching_count(int n) {
  if (n < 0 || n % 2 != 0) return 0;
  std::uint64_t c = 1;
  for (int k = n - 1; k > 1; k -= 2) c *= static_cast<std::uint64_t>(k);
  return c;
}

WickEvaluator::WickEvaluator(const CovarianceMatrix& sigma) : n_modes_(sigma.n_modes()) {
  aa_.resize(n_modes_, n_modes_);
  adag_adag_.resize(n_modes_, n_modes_);
  adag_a_.resize(n_modes_, n_modes_);
  a_adag_.resize(n_modes_, n_modes_);
  for (int j = 0; j < n_modes_; ++j)
    for (int k = 0; k < n_modes_; ++k) {
      aa_(j, k) = pair_contraction(sigma, j, k, ContractionKind::AA);
      adag_adag_(j, k) = pair_contraction(sigma, j, k, ContractionKind::AdagAdag);
      adag_a_(j, k) = pair_contraction(sigma, j, k, ContractionKind::AdagA);
      a_adag_(j, k) = pair_contraction(sigma, j, k, ContractionKind::AAdag);
    }
}

Complex WickEvaluator::contraction(const Ladder& left, const Ladder& right) const {
  if (!left.dagger && !right.dagger) return aa_(left.mode, right.mode);
  if (left.dagger && right.dagger) return adag_adag_(left.mode, right.mode);
  if (left.dagger) return adag_a_(left.mode, right.mode);
  return a_adag_(left.mode, right.mode);
}

Complex WickEvaluator::moment(const OperatorString& string) {
  check_modes(string, n_modes_);
  return moment_of(string.ops);
}

Complex WickEvaluator::moment_of(const std::vector<Ladder>& ops) {
  if (ops.empty()) return {1.0, 0.0};
  if (ops.size() % 2 != 0) return {0.0, 0.0};
  if (ops.size() == 2) return contraction(ops[0], ops[1]);

  std::uint64_t key = 0;
  const bool memo = memo_key(ops, key);
  if (memo) {
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }

  Complex sum{0.0, 0.0};
  std::vector<Ladder> rest;
  rest.reserve(ops.size() - 2);
  for (std::size_t v = 1; v < ops.size(); ++v) {
    const Complex c = contraction(ops[0], ops[v]);
    if (c == Complex{0.0, 0.0}) continue;
    rest.clear();
    for (std::size_t u = 1; u < ops.size(); ++u)
      if (u != v) rest.push_back(ops[u]);
    sum += c * moment_of(rest);
  }
  if (memo) cache_.emplace(key, sum);
  return sum;
}

Complex WickEvaluator::moment_by_enumeration(const OperatorString& string) const {
  check_modes(string, n_modes_);
  const int n = static_cast<int>(string.size());
  if (n == 0) return {1.0, 0.0};
  if (n % 2 != 0) return {0.0, 0.0};
  Complex sum{0.0, 0.0};
  for (const auto& matching : perfect_matchings(n)) {
    Complex term{1.0, 0.0};
    for (const auto& [u, v] : matching) term *= contraction(string.ops[u], string.ops[v]);
    sum += term;
  }
  return sum;
}

Complex gaussian_moment(const OperatorString& string, const CovarianceMatrix& sigma) {
  WickEvaluator eval(sigma);
  return eval.moment(string);
}

namespace {

struct Sandwich {
  WickEvaluator eval;
  OperatorString left;   // O^dagger
  OperatorString right;  // O
  double norm = 1.0;

  Complex expect(std::initializer_list<Ladder> inner) {
    OperatorString s = left;
    s.ops.insert(s.ops.end(), inner.begin(), inner.end());
    s.ops.insert(s.ops.end(), right.ops.begin(), right.ops.end());
    return eval.moment(s) / norm;
  }
};

Sandwich prepare(const CovarianceMatrix& sigma, const OperatorString& string, const WickOptions& options) {
  if (string.size() > options.max_string_length)
    throw InvalidArgument(fmt::format("operator string {} has {} factors; the cap is {}", string.label(),
                                      string.size(), options.max_string_length));
  check_modes(string, sigma.n_modes());
  Sandwich s{WickEvaluator(sigma), string.adjoint(), string, 1.0};
  const Complex k = s.eval.moment(s.left * s.right);
  if (std::abs(k.imag()) > options.max_imaginary_residue * std::max(1.0, std::abs(k.real())))
    throw NumericalError(fmt::format("heralding norm has imaginary residue {:.3e}", k.imag()));
  if (!(k.real() > options.min_norm))
    throw HeraldingImpossible(
        fmt::format("operator string {} annihilates the state (K = {:.3e})", string.label(), k.real()),
        k.real());
  s.norm = k.real();
  return s;
}

double checked_real(Complex z, double tol, const char* what) {
  if (std::abs(z.imag()) > tol * std::max(1.0, std::abs(z.real())))
    throw NumericalError(fmt::format("{} has imaginary residue {:.3e}", what, z.imag()));
  return z.real();
}

}  // namespace

DeGaussifiedState degaussify_covariance(const CovarianceMatrix& sigma, const OperatorString& string,
                                        const WickOptions& options) {
  const int n = sigma.n_modes();
  if (string.empty()) return {Eigen::VectorXd::Zero(2 * n), sigma, 1.0};

  Sandwich s = prepare(sigma, string, options);
  const double tol = options.max_imaginary_residue;

  // First moments; zero for zero-mean Gaussian input but evaluated regardless.
  Eigen::VectorXd mean(2 * n);
  for (int j = 0; j < n; ++j) {
    const Complex a = s.expect({{j, false}});
    const Complex ad = s.expect({{j, true}});
    mean(2 * j) = checked_real(a + ad, tol, "<x>");
    mean(2 * j + 1) = checked_real((a - ad) / Complex(0.0, 1.0), tol, "<p>");
  }

  // Unsymmetrized quadrature products <xi_m xi_n>.
  Eigen::MatrixXcd raw(2 * n, 2 * n);
  const Complex i(0.0, 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const Complex aa = s.expect({{j, false}, {k, false}});
      const Complex aad = s.expect({{j, false}, {k, true}});
      const Complex ada = s.expect({{j, true}, {k, false}});
      const Complex adad = s.expect({{j, true}, {k, true}});
      raw(2 * j, 2 * k) = aa + aad + ada + adad;
      raw(2 * j + 1, 2 * k + 1) = -aa + aad + ada - adad;
      raw(2 * j, 2 * k + 1) = (aa - aad + ada - adad) / i;
      raw(2 * j + 1, 2 * k) = (aa + aad - ada - adad) / i;
    }

  Eigen::MatrixXd cov(2 * n, 2 * n);
  for (int m = 0; m < 2 * n; ++m)
    for (int q = 0; q < 2 * n; ++q) {
      const Complex sym = 0.5 * (raw(m, q) + raw(q, m));
      cov(m, q) = checked_real(sym, tol, "symmetrized second moment") - mean(m) * mean(q);
    }
  return {mean, CovarianceMatrix(0.5 * (cov + cov.transpose())), s.norm};
}

Eigen::MatrixXd degaussify_x_block(const CovarianceMatrix& sigma, const OperatorString& string,
                                   const WickOptions& options) {
  if (string.empty()) return x_submatrix(sigma);
  const int n = sigma.n_modes();
  Sandwich s = prepare(sigma, string, options);
  const double tol = options.max_imaginary_residue;

  Eigen::VectorXd mean_x(n);
  for (int j = 0; j < n; ++j)
    mean_x(j) = checked_real(s.expect({{j, false}}) + s.expect({{j, true}}), tol, "<x>");

  Eigen::MatrixXd xx(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      // x_j and x_k commute, so <x_j x_k> is already symmetric.
      const Complex v = s.expect({{j, false}, {k, false}}) + s.expect({{j, false}, {k, true}}) +
                        s.expect({{j, true}, {k, false}}) + s.expect({{j, true}, {k, true}});
      xx(j, k) = xx(k, j) = checked_real(v, tol, "<x x>") - mean_x(j) * mean_x(k);
    }
  return xx;
}

}  // namespace ripc
