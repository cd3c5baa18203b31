#pragma once

// Experiment harness: configuration, realization loops over a parameter grid,
// and CSV / JSON output.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ripc/readout.hpp"
#include "ripc/reservoir.hpp"
#include "ripc/signal.hpp"

namespace ripc {

enum class Experiment { QelmScan, MemoryScan, LeakyScan, FiniteResources, BoundOnly, OracleCheck };
enum class NetworkKind { Passive, Active };

std::string_view to_string(Experiment e);
std::string_view to_string(NetworkKind k);

inline constexpr int kSummarySchemaVersion = 1;

struct ExperimentConfig {
  Experiment experiment = Experiment::QelmScan;
  std::vector<int> n_modes;
  std::vector<int> tau_max{0};
  std::vector<int> n_photon_ops{0};
  PhotonOp op_kind = PhotonOp::Subtract;
  std::vector<double> ensemble_sizes{0.0};  // 0 means exact observables
  int realizations = 10;
  std::uint64_t seed = 0;
  bool identical_modes = false;
  double squeezing = 0.75;
  Phases phases{0, 5000, 1000};
  int max_total_degree = 8;
  std::optional<int> max_delay;  // unset: tau_max, plus 5 for leaky runs
  int max_factors = 3;
  double p = 1e-10;
  double rho = 0.001;
  LeakMode leak_mode = LeakMode::Broadcast;
  NetworkKind network = NetworkKind::Passive;
  std::size_t max_string_length = 4;

  /// Config with every default of `experiment` applied.
  static ExperimentConfig defaults_for(Experiment e);

  /// Throws ConfigError naming the offending key.
  void validate() const;

  SchemeKind scheme() const;

  /// Basis truncation actually used at one tau_max.
  BasisTruncation truncation(int tau_max) const;

  /// Deterministic, fully expanded YAML rendering (defaults included).
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Throws ConfigError with a "line L, column C" diagnostic on malformed input,
/// unknown keys (with the closest valid key) and missing required keys.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Nearest candidate by edit distance; empty when nothing is close.
std::string suggest_key(const std::string& key, const std::vector<std::string>& candidates);

struct GridPoint {
  int n_modes = 1;
  int tau_max = 0;
  int n_ops = 0;
  double ensemble_size = 0.0;
};

struct ResultRow {
  int realization = 0;
  std::string scheme;
  int n_modes = 0;
  int tau_max = 0;
  int n_ops = 0;
  double ensemble_size = 0.0;  // 0: exact
  double bound = 0.0;
  std::optional<double> total;  // unset for bound-only rows
  std::optional<double> delta_c;
  std::map<int, double> per_delay;
  std::map<int, double> per_degree;
  double cross_term_total = 0.0;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  std::string version;
  std::uint64_t config_hash = 0;
};

struct SummaryStat {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
};

SummaryStat summarize(const std::vector<double>& values);

struct GridSummary {
  GridPoint point;
  std::string scheme;
  SummaryStat bound;
  SummaryStat total;
  SummaryStat delta_c;
  SummaryStat cross_term_total;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  std::vector<GridSummary> summary;
  std::size_t heralding_resamples = 0;
  std::size_t regularized_draws = 0;
};

std::vector<GridPoint> grid_points(const ExperimentConfig& cfg);

/// Seed shared by every run of one (N, tau_max, realization), so schemes that
/// differ only in photon operations or M see identical coefficients, network
/// and input.
std::uint64_t realization_seed(const ExperimentConfig& cfg, const GridPoint& point, int realization, int attempt = 0);

struct RealizationOutcome {
  ResultRow row;
  std::size_t heralding_resamples = 0;
  std::size_t regularized_draws = 0;
};

/// One realization at one grid point. A heralding failure is retried once on
/// a fresh draw; a second failure propagates.
RealizationOutcome run_realization(const ExperimentConfig& cfg, const GridPoint& point, int realization);

/// Grid points and realizations run on `jobs` threads; output order and
/// content do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1);

std::string emit_csv(const std::vector<ResultRow>& rows);
std::string emit_summary(const ExperimentResult& result);

/// Writes results.csv and summary.json under `dir`.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace ripc
