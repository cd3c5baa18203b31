#include "ripc/oracle.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "ripc/encoding.hpp"
#include "ripc/error.hpp"
#include "ripc/gaussian.hpp"
#include "ripc/rng.hpp"

namespace ripc {
namespace {

Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void check_register(int n_modes, int cutoff) {
  if (n_modes < 1 || n_modes > 3) throw InvalidArgument(fmt::format("oracle: {} modes, supported 1..3", n_modes));
  const int limit = n_modes == 1 ? 80 : (n_modes == 2 ? 16 : 10);
  if (cutoff < 2 || cutoff > limit)
    throw InvalidArgument(fmt::format("oracle: cutoff {} outside 2..{} for {} modes", cutoff, limit, n_modes));
}

Eigen::VectorXcd vacuum_amplitudes(int n_modes, int cutoff) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(ipow(cutoff + 1, n_modes));
  v(0) = 1.0;
  return v;
}

Eigen::Index stride_of(int mode, int n_modes, int cutoff) { return ipow(cutoff + 1, n_modes - 1 - mode); }

}  // namespace

FockState::FockState(int n_modes, int cutoff)
    : n_modes_(n_modes), cutoff_(cutoff), amplitudes_((check_register(n_modes, cutoff), vacuum_amplitudes(n_modes, cutoff))) {}

FockState::FockState(int n_modes, int cutoff, Eigen::VectorXcd amplitudes)
    : n_modes_(n_modes), cutoff_(cutoff), amplitudes_(std::move(amplitudes)) {
  check_register(n_modes, cutoff);
  if (amplitudes_.size() != ipow(cutoff + 1, n_modes))
    throw DimensionMismatch("FockState: amplitude vector has the wrong length");
}

FockState FockState::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw NumericalError("FockState: cannot normalize the zero vector");
  return FockState(n_modes_, cutoff_, amplitudes_ / n);
}

std::vector<int> FockState::occupations(Eigen::Index index) const {
  std::vector<int> occ(static_cast<std::size_t>(n_modes_));
  for (int k = n_modes_ - 1; k >= 0; --k) {
    occ[static_cast<std::size_t>(k)] = static_cast<int>(index % (cutoff_ + 1));
    index /= (cutoff_ + 1);
  }
  return occ;
}

double FockState::leakage() const {
  const double total = amplitudes_.squaredNorm();
  if (!(total > 0.0)) return 0.0;
  double tail = 0.0;
  for (Eigen::Index i = 0; i < dimension(); ++i) {
    for (int n : occupations(i)) {
      if (n > cutoff_ - 2) {
        tail += std::norm(amplitudes_(i));
        break;
      }
    }
  }
  return tail / total;
}

Eigen::MatrixXcd annihilation_matrix(int cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd embed_mode_operator(const Eigen::MatrixXcd& single, int mode, int n_modes) {
  if (mode < 0 || mode >= n_modes) throw InvalidArgument("embed_mode_operator: mode out of range");
  const Eigen::Index d = single.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < n_modes; ++k) {
    const Eigen::MatrixXcd factor = (k == mode) ? single : Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd next(out.rows() * d, out.cols() * d);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(i * d, j * d, d, d) = out(i, j) * factor;
    out = std::move(next);
  }
  return out;
}

FockState build_squeezed_vacuum(double r, double phi, int cutoff, double max_leakage) {
  if (!(r >= 0.0)) throw InvalidArgument("build_squeezed_vacuum: r must be >= 0");
  check_register(1, cutoff);
  const Complex xi = -r * std::exp(Complex(0.0, phi));
  const Eigen::MatrixXcd a = annihilation_matrix(cutoff);
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd generator = 0.5 * (std::conj(xi) * (a * a) - xi * (ad * ad));
  FockState out(1, cutoff, generator.exp().col(0));
  const double leak = out.leakage();
  if (leak > max_leakage)
    throw CutoffInsufficient(
        fmt::format("squeezed vacuum r={} at cutoff {} leaks {:.3e} above the last two shells", r, cutoff, leak), leak);
  return out.normalized();
}

FockState product_state(const std::vector<FockState>& factors) {
  if (factors.empty()) throw InvalidArgument("product_state: no factors");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
  const int cutoff = factors.front().cutoff();
  int modes = 0;
  for (const FockState& f : factors) {
    if (f.cutoff() != cutoff) throw DimensionMismatch("product_state: factors must share one cutoff");
    Eigen::VectorXcd next(amps.size() * f.dimension());
    for (Eigen::Index i = 0; i < amps.size(); ++i) next.segment(i * f.dimension(), f.dimension()) = amps(i) * f.amplitudes();
    amps = std::move(next);
    modes += f.n_modes();
  }
  return FockState(modes, cutoff, std::move(amps));
}

FockState apply_passive_network(const FockState& state, const Eigen::MatrixXcd& unitary) {
  const int n = state.n_modes();
  if (unitary.rows() != n || unitary.cols() != n) throw DimensionMismatch("apply_passive_network: unitary size");
  if ((unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidArgument("apply_passive_network: matrix is not unitary");
  const Eigen::MatrixXcd log_u = unitary.log();
  const Eigen::MatrixXcd a = annihilation_matrix(state.cutoff());
  std::vector<Eigen::MatrixXcd> modes;
  for (int k = 0; k < n; ++k) modes.push_back(embed_mode_operator(a, k, n));
  Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(state.dimension(), state.dimension());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (std::abs(log_u(j, k)) > 0.0) generator += log_u(j, k) * modes[j].adjoint() * modes[k];
  return FockState(n, state.cutoff(), generator.exp() * state.amplitudes());
}

FockState apply_ladder(const FockState& state, const Ladder& op) {
  const int n = state.n_modes();
  const int c = state.cutoff();
  if (op.mode < 0 || op.mode >= n) throw InvalidArgument("apply_ladder: mode out of range");
  const Eigen::Index stride = stride_of(op.mode, n, c);
  const Eigen::VectorXcd& in = state.amplitudes();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    const int occ = static_cast<int>((i / stride) % (c + 1));
    if (op.dagger) {
      if (occ < c) out(i + stride) += std::sqrt(static_cast<double>(occ + 1)) * in(i);
    } else if (occ > 0) {
      out(i - stride) += std::sqrt(static_cast<double>(occ)) * in(i);
    }
  }
  return FockState(n, c, std::move(out));
}

namespace {

FockState apply_ops(FockState psi, const OperatorString& string) {
  for (auto it = string.ops.rbegin(); it != string.ops.rend(); ++it) psi = apply_ladder(psi, *it);
  return psi;
}

}  // namespace

HeraldedState apply_string(const FockState& state, const OperatorString& string, double min_norm) {
  const FockState psi = state.normalized();
  const FockState out = apply_ops(psi, string);
  const double k = out.amplitudes().squaredNorm();
  if (!(k > min_norm))
    throw HeraldingImpossible(fmt::format("oracle: heralding norm {:.3e} for {}", k, string.label()), k);
  return {out.normalized(), k};
}

Complex expectation(const FockState& state, const OperatorString& string) {
  const double n2 = state.amplitudes().squaredNorm();
  if (!(n2 > 0.0)) throw NumericalError("expectation: zero state");
  return state.amplitudes().dot(apply_ops(state, string).amplitudes()) / n2;
}

double mean_photon_number(const FockState& state, int mode) {
  return expectation(state, OperatorString{{{mode, true}, {mode, false}}}).real();
}

QuadratureMoments quadrature_moments(const FockState& state) {
  const int n = state.n_modes();
  const int dim = 2 * n;
  // Quadrature m as c_m(a) a_j + c_m(a^dagger) a_j^dagger.
  auto coeff = [](int m, bool dagger) -> Complex {
    if (m % 2 == 0) return 1.0;
    return dagger ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
  };
  QuadratureMoments out{Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
  for (int m = 0; m < dim; ++m) {
    Complex v = 0.0;
    for (bool d : {false, true}) v += coeff(m, d) * expectation(state, OperatorString{{{m / 2, d}}});
    out.mean(m) = v.real();
  }
  for (int m = 0; m < dim; ++m) {
    for (int q = m; q < dim; ++q) {
      Complex v = 0.0;
      for (bool d1 : {false, true})
        for (bool d2 : {false, true})
          v += coeff(m, d1) * coeff(q, d2) * expectation(state, OperatorString{{{m / 2, d1}, {q / 2, d2}}});
      out.covariance(m, q) = out.covariance(q, m) = v.real() - out.mean(m) * out.mean(q);
    }
  }
  return out;
}

namespace {

constexpr double kSqueezing = 0.75;
// Largest squeezing (0.05 grid) whose truncated vacuum at cutoff 14 keeps the
// weight above the last two shells below 1e-8.
constexpr double kTwoModeSqueezing = 0.3;

OracleCaseResult make_case(std::string name, int cutoff, double error, double tol, std::string detail = {}) {
  return {std::move(name), cutoff, error, tol, error <= tol, std::move(detail)};
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

void single_mode_cases(std::vector<OracleCaseResult>& out, int cutoff) {
  const OperatorString n4{{{0, true}, {0, true}, {0, false}, {0, false}}};
  {
    const FockState sv = build_squeezed_vacuum(kSqueezing, 0.0, cutoff);
    const double sh = std::sinh(kSqueezing);
    out.push_back(make_case("squeezed vacuum <n>", cutoff, std::abs(mean_photon_number(sv, 0) - sh * sh), 1e-8));
    const Complex wick = gaussian_moment(n4, CovarianceMatrix(single_mode_squeezed_cov(kSqueezing, 0.0)));
    out.push_back(make_case("squeezed vacuum <a+ a+ a a>", cutoff, std::abs(wick - expectation(sv, n4)), 1e-8));
  }
  for (double phi : {0.0, 1.1}) {
    const FockState sv = build_squeezed_vacuum(kSqueezing, phi, cutoff);
    const Eigen::MatrixXd diff = quadrature_moments(sv).covariance - single_mode_squeezed_cov(kSqueezing, phi);
    out.push_back(make_case(fmt::format("squeezed vacuum covariance phi={}", phi), cutoff, max_abs(diff), 1e-6));
  }
  for (double phi : {0.0, 0.7}) {
    const FockState sv = build_squeezed_vacuum(kSqueezing, phi, cutoff);
    const CovarianceMatrix sigma(single_mode_squeezed_cov(kSqueezing, phi));
    for (bool addition : {false, true}) {
      const OperatorString op = OperatorString::photon_ops(1, addition, 1);
      const HeraldedState fock = apply_string(sv, op);
      const DeGaussifiedState wick = degaussify_covariance(sigma, op);
      const std::string tag = fmt::format("1 mode r={} phi={} {}", kSqueezing, phi, op.label());
      out.push_back(make_case(tag + " covariance", cutoff,
                              max_abs(quadrature_moments(fock.state).covariance - wick.covariance.matrix()), 1e-6));
      out.push_back(make_case(tag + " heralding norm", cutoff, std::abs(fock.norm - wick.norm), 1e-6,
                              fmt::format("K = {:.10f}", wick.norm)));
    }
  }
}

void two_mode_cases(std::vector<OracleCaseResult>& out, int cutoff) {
  const double phi0 = 0.4, phi1 = 2.3;
  Philox4x32 rng(20240611, purpose_tag("oracle-network"));
  const Eigen::MatrixXcd u = haar_unitary(2, rng);
  const SymplecticMatrix s = passive_symplectic(u);
  const FockState in = product_state({build_squeezed_vacuum(kTwoModeSqueezing, phi0, cutoff),
                                      build_squeezed_vacuum(kTwoModeSqueezing, phi1, cutoff)});
  const FockState evolved = apply_passive_network(in, u);

  Eigen::MatrixXd sigma_in = Eigen::MatrixXd::Zero(4, 4);
  sigma_in.block<2, 2>(0, 0) = single_mode_squeezed_cov(kTwoModeSqueezing, phi0);
  sigma_in.block<2, 2>(2, 2) = single_mode_squeezed_cov(kTwoModeSqueezing, phi1);
  const CovarianceMatrix sigma = propagate(CovarianceMatrix(sigma_in), s);

  out.push_back(make_case("2 modes passive network Gaussian covariance", cutoff,
                          max_abs(quadrature_moments(evolved).covariance - sigma.matrix()), 1e-6));
  for (bool addition : {false, true}) {
    const OperatorString op = OperatorString::photon_ops(1, addition, 2);
    const HeraldedState fock = apply_string(evolved, op);
    const Eigen::MatrixXd x_fock = x_submatrix(CovarianceMatrix(quadrature_moments(fock.state).covariance));
    const DeGaussifiedState wick = degaussify_covariance(sigma, op);
    const std::string tag = fmt::format("2 modes r={} network {}", kTwoModeSqueezing, op.label());
    out.push_back(make_case(tag + " x covariance", cutoff, max_abs(x_fock - degaussify_x_block(sigma, op)), 1e-4));
    out.push_back(make_case(tag + " heralding norm", cutoff, std::abs(fock.norm - wick.norm), 1e-6,
                            fmt::format("K = {:.10f}", wick.norm)));
  }
}

}  // namespace

std::vector<OracleCaseResult> run_oracle_checks() {
  std::vector<OracleCaseResult> out;
  for (int q = 1; q <= 5; ++q) {
    std::uint64_t dfact = 1;
    for (int k = 2 * q - 1; k > 1; k -= 2) dfact *= static_cast<std::uint64_t>(k);
    const auto enumerated = perfect_matchings(2 * q).size();
    const bool ok = enumerated == dfact && matching_count(2 * q) == dfact;
    out.push_back({fmt::format("matchings of {} operators = {}", 2 * q, dfact), 0, ok ? 0.0 : 1.0, 0.0, ok,
                   fmt::format("enumerated {}", enumerated)});
  }
  single_mode_cases(out, kSingleModeCutoff);
  two_mode_cases(out, kTwoModeCutoff);

  // Same comparisons on larger registers, where truncation error is below
  // the tolerances.
  single_mode_cases(out, 2 * kSingleModeCutoff);
  two_mode_cases(out, 16);

  {
    const OperatorString sub{{{0, false}}};
    const auto cov = [&](int cutoff) {
      return quadrature_moments(apply_string(build_squeezed_vacuum(kSqueezing, 0.0, cutoff), sub).state).covariance;
    };
    out.push_back(make_case("cutoff doubling, subtracted covariance shift", kSingleModeCutoff,
                            max_abs(cov(kSingleModeCutoff) - cov(2 * kSingleModeCutoff)), 1e-5));
  }
  return out;
}

}  // namespace ripc
