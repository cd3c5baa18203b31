#include "ripc/reservoir.hpp"

#include <fmt/format.h>

#include "ripc/error.hpp"
#include "ripc/rng.hpp"

namespace ripc {

LinearReservoir::LinearReservoir(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::VectorXd x0,
                                 bool require_fading_memory)
    : a_(std::move(a)), b_(std::move(b)), x0_(std::move(x0)) {
  if (a_.rows() != a_.cols() || b_.rows() != a_.rows() || x0_.size() != a_.rows())
    throw DimensionMismatch(fmt::format("LinearReservoir: A {}x{}, B {}x{}, x0 {}", a_.rows(), a_.cols(),
                                        b_.rows(), b_.cols(), x0_.size()));
  if (require_fading_memory) {
    const double rho = spectral_radius(a_);
    if (!(rho < 1.0))
      throw InvalidArgument(fmt::format("LinearReservoir: spectral radius {:.6f} >= 1, no fading memory", rho));
  }
}

Eigen::MatrixXd run_linear(const LinearReservoir& res, const Eigen::MatrixXd& g_stream) {
  if (g_stream.rows() == 0) throw InvalidArgument("run_linear: empty input stream");
  if (g_stream.cols() != res.input_dimension())
    throw DimensionMismatch("run_linear: input width does not match B");
  Eigen::MatrixXd out(g_stream.rows(), res.state_dimension());
  Eigen::VectorXd x = res.x0();
  for (Eigen::Index t = 0; t < g_stream.rows(); ++t) {
    x = res.A() * x + res.B() * g_stream.row(t).transpose();
    out.row(t) = x.transpose();
  }
  return out;
}

AugmentedSystem affine_augment(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = a.rows();
  const Eigen::Index p = b.cols();
  if (a.cols() != m || b.rows() != m || c.size() != m)
    throw DimensionMismatch("affine_augment: inconsistent dimensions");
  AugmentedSystem out;
  out.A = Eigen::MatrixXd::Zero(m + 1, m + 1);
  out.A.topLeftCorner(m, m) = a;
  out.A.topRightCorner(m, 1) = c;
  out.A(m, m) = 1.0;
  out.B = Eigen::MatrixXd::Zero(m + 1, p + 1);
  out.B.topLeftCorner(m, p) = b;
  return out;
}

std::string_view to_string(LeakMode mode) {
  return mode == LeakMode::Broadcast ? "broadcast" : "elementwise";
}

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Qelm: return "qelm";
    case SchemeKind::QrcPreprocessing: return "qrc_preprocessing";
    case SchemeKind::QrcLeaky: return "qrc_leaky";
  }
  return "?";
}

std::string_view to_string(PhotonOp op) { return op == PhotonOp::Subtract ? "subtract" : "add"; }

Eigen::VectorXd draw_leak_vector(Eigen::Index size, std::uint64_t seed) {
  Philox4x32 rng(seed, purpose_tag("leak-vector"));
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = uniform01(rng);
  return v;
}

Eigen::MatrixXd leaky_memory(const Eigen::MatrixXd& x_stream, double rho, const Eigen::VectorXd& v,
                             LeakMode mode) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("leaky_memory: rho must lie in [0, 1]");
  if (v.size() != x_stream.cols()) throw DimensionMismatch("leaky_memory: leak vector length mismatch");
  if ((v.array() < 0.0).any() || (v.array() > 1.0).any())
    throw InvalidArgument("leaky_memory: leak vector entries must lie in [0, 1]");
  Eigen::MatrixXd out(x_stream.rows(), x_stream.cols());
  if (x_stream.rows() == 0) return out;
  out.row(0) = (1.0 - rho) * x_stream.row(0);
  for (Eigen::Index t = 1; t < x_stream.rows(); ++t) {
    if (mode == LeakMode::Broadcast) {
      const double feedback = out.row(t - 1).dot(v.transpose());
      out.row(t) = (1.0 - rho) * x_stream.row(t);
      out.row(t).array() += rho * feedback;
    } else {
      out.row(t) = rho * out.row(t - 1).cwiseProduct(v.transpose()) + (1.0 - rho) * x_stream.row(t);
    }
  }
  return out;
}

void SchemeConfig::validate() const {
  if (n_modes < 1) throw InvalidArgument("scheme: n_modes must be >= 1");
  if (n_photon_ops < 0) throw InvalidArgument("scheme: n_photon_ops must be >= 0");
  if (tau_max < 0) throw InvalidArgument("scheme: tau_max must be >= 0");
  if ((kind == SchemeKind::Qelm || kind == SchemeKind::QrcLeaky) && tau_max != 0)
    throw InvalidArgument(fmt::format("scheme: {} requires tau_max = 0", to_string(kind)));
  if (static_cast<std::size_t>(n_photon_ops) > wick.max_string_length)
    throw InvalidArgument(fmt::format("scheme: {} photon operations exceed the string cap {}", n_photon_ops,
                                      wick.max_string_length));
  if (kind == SchemeKind::QrcLeaky) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("scheme: rho must lie in [0, 1]");
    if (leak_vector.size() != n_modes * (n_modes + 1) / 2)
      throw DimensionMismatch("scheme: leak vector must have N(N+1)/2 entries");
  }
  sampling.validate(n_modes);
}

OperatorString SchemeConfig::photon_string() const {
  return OperatorString::photon_ops(n_photon_ops, op_kind == PhotonOp::Add, n_modes);
}

SchemeOutput run_scheme(const SchemeConfig& cfg, const EncodingConfig& encoding,
                        const SymplecticMatrix& network, const InputSeries& input) {
  cfg.validate();
  encoding.validate();
  if (encoding.n_modes != cfg.n_modes || network.n_modes() != cfg.n_modes)
    throw DimensionMismatch(fmt::format("run_scheme: scheme has {} modes, encoding {}, network {}", cfg.n_modes,
                                        encoding.n_modes, network.n_modes()));
  if (encoding.tau_max != cfg.tau_max) throw DimensionMismatch("run_scheme: encoding and scheme tau_max differ");

  const int n = cfg.n_modes;
  const auto m = static_cast<Eigen::Index>(n * (n + 1) / 2);
  const OperatorString string = cfg.photon_string();

  SchemeOutput out;
  out.first_valid_step = static_cast<std::size_t>(cfg.tau_max);
  out.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(input.size()), m);
  for (std::size_t t = out.first_valid_step; t < input.size(); ++t) {
    const CovarianceMatrix evolved = propagate(encode(input, encoding, t), network);
    const Eigen::MatrixXd xx = degaussify_x_block(evolved, string, cfg.wick);
    Eigen::VectorXd f;
    if (cfg.sampling.enabled) {
      Philox4x32 rng(cfg.sampling.seed, t);
      bool regularized = false;
      f = noisy_features(xx, cfg.sampling.ensemble_size, rng, &regularized);
      out.regularized_draws += regularized ? 1 : 0;
    } else {
      f = upper_triangle(xx);
    }
    out.features.row(static_cast<Eigen::Index>(t)) = f.transpose();
  }
  if (cfg.kind == SchemeKind::QrcLeaky)
    out.features = leaky_memory(out.features, cfg.rho, cfg.leak_vector, cfg.leak_mode);
  return out;
}

PhaseSplit split_phases(const Eigen::MatrixXd& features, const Phases& phases) {
  if (static_cast<std::size_t>(features.rows()) != phases.total())
    throw DimensionMismatch("split_phases: row count differs from the phase total");
  return {features.topRows(phases.washout), features.middleRows(phases.train_begin(), phases.train),
          features.bottomRows(phases.test)};
}

}  // namespace ripc
