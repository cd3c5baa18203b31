#pragma once

// Linear reservoir dynamics x_t = A x_{t-1} + B g_t, classical post-reservoir
// memory, and assembly of the photonic reservoir schemes.

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "ripc/encoding.hpp"
#include "ripc/gaussian.hpp"
#include "ripc/resources.hpp"
#include "ripc/signal.hpp"
#include "ripc/wick.hpp"

namespace ripc {

class LinearReservoir {
 public:
  /// Throws DimensionMismatch on inconsistent shapes and InvalidArgument when
  /// require_fading_memory is set and the spectral radius of A is >= 1.
  LinearReservoir(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::VectorXd x0,
                  bool require_fading_memory = true);

  const Eigen::MatrixXd& A() const noexcept { return a_; }
  const Eigen::MatrixXd& B() const noexcept { return b_; }
  const Eigen::VectorXd& x0() const noexcept { return x0_; }
  Eigen::Index state_dimension() const noexcept { return a_.rows(); }
  Eigen::Index input_dimension() const noexcept { return b_.cols(); }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  Eigen::VectorXd x0_;
};

/// Row k of the result is the state after consuming row k of g_stream.
Eigen::MatrixXd run_linear(const LinearReservoir& res, const Eigen::MatrixXd& g_stream);

struct AugmentedSystem {
  Eigen::MatrixXd A;  // [[A, c], [0, 1]]
  Eigen::MatrixXd B;  // [[B, 0], [0, 0]]
};

/// Linear system on (x, 1) reproducing x_t = A x_{t-1} + B g_t + c when fed
/// (g_t, 1) and started from (x_0, 1).
AugmentedSystem affine_augment(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& c);

enum class LeakMode {
  Broadcast,    // o_t = rho (v . o_{t-1}) 1 + (1 - rho) x_t
  Elementwise,  // o_t = rho (v * o_{t-1}) + (1 - rho) x_t
};

std::string_view to_string(LeakMode mode);

/// Leak vector with entries uniform in [0, 1].
Eigen::VectorXd draw_leak_vector(Eigen::Index size, std::uint64_t seed);

/// Leaky-neuron recursion over the rows of x_stream, o_0 = (1 - rho) x_0.
Eigen::MatrixXd leaky_memory(const Eigen::MatrixXd& x_stream, double rho, const Eigen::VectorXd& v,
                             LeakMode mode = LeakMode::Broadcast);

enum class SchemeKind { Qelm, QrcPreprocessing, QrcLeaky };
enum class PhotonOp { Subtract, Add };

std::string_view to_string(SchemeKind kind);
std::string_view to_string(PhotonOp op);

struct SchemeConfig {
  SchemeKind kind = SchemeKind::Qelm;
  int n_modes = 1;
  int n_photon_ops = 0;
  PhotonOp op_kind = PhotonOp::Subtract;
  int tau_max = 0;
  double rho = 0.001;
  LeakMode leak_mode = LeakMode::Broadcast;
  Eigen::VectorXd leak_vector;  // length N(N+1)/2, qrc_leaky only
  WickOptions wick;
  SamplingConfig sampling;

  void validate() const;

  /// Photon operations on modes 1, 2, ... in order.
  OperatorString photon_string() const;
};

struct SchemeOutput {
  Eigen::MatrixXd features;       // row t: readout features at input step t
  std::size_t first_valid_step = 0;
  std::size_t regularized_draws = 0;
};

/// Per step: encode, propagate through the network, apply the photon
/// operations, extract (optionally sampled) x-covariance features; qrc_leaky
/// then runs the leaky neuron over the stream.
SchemeOutput run_scheme(const SchemeConfig& cfg, const EncodingConfig& encoding,
                        const SymplecticMatrix& network, const InputSeries& input);

struct PhaseSplit {
  Eigen::MatrixXd washout;
  Eigen::MatrixXd train;
  Eigen::MatrixXd test;
};

PhaseSplit split_phases(const Eigen::MatrixXd& features, const Phases& phases);

}  // namespace ripc
