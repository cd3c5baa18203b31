#include "ripc/runner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "ripc/encoding.hpp"
#include "ripc/error.hpp"
#include "ripc/gaussian.hpp"
#include "ripc/oracle.hpp"
#include "ripc/rng.hpp"

namespace ripc {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::QelmScan: return "qelm_scan";
    case Experiment::MemoryScan: return "memory_scan";
    case Experiment::LeakyScan: return "leaky_scan";
    case Experiment::FiniteResources: return "finite_resources";
    case Experiment::BoundOnly: return "bound_only";
    case Experiment::OracleCheck: return "oracle_check";
  }
  return "?";
}

std::string_view to_string(NetworkKind k) { return k == NetworkKind::Passive ? "passive" : "active"; }

ExperimentConfig ExperimentConfig::defaults_for(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::QelmScan:
    case Experiment::BoundOnly:
    case Experiment::OracleCheck:
      c.phases = {0, 5000, 1000};
      c.max_total_degree = 8;
      break;
    case Experiment::MemoryScan:
    case Experiment::LeakyScan:
      c.phases = {100, 5000, 1000};
      c.max_total_degree = 4;
      break;
    case Experiment::FiniteResources:
      c.phases = {100, 10000, 1000};
      c.max_total_degree = 8;
      break;
  }
  return c;
}

SchemeKind ExperimentConfig::scheme() const {
  switch (experiment) {
    case Experiment::MemoryScan: return SchemeKind::QrcPreprocessing;
    case Experiment::LeakyScan: return SchemeKind::QrcLeaky;
    default: return SchemeKind::Qelm;
  }
}

BasisTruncation ExperimentConfig::truncation(int tau) const {
  BasisTruncation t;
  t.max_total_degree = max_total_degree;
  t.max_delay = max_delay ? *max_delay : tau + (experiment == Experiment::LeakyScan ? 5 : 0);
  t.max_factors = std::min(max_factors, t.max_delay + 1);
  return t;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError(fmt::format("key '{}': {}", key, why));
  };
  if (experiment == Experiment::OracleCheck) return;
  if (n_modes.empty()) fail("n_modes", "missing required key");
  for (int n : n_modes)
    if (n < 1) fail("n_modes", "mode counts must be >= 1");
  if (tau_max.empty()) fail("tau_max", "list must be nonempty");
  for (int t : tau_max) {
    if (t < 0) fail("tau_max", "must be >= 0");
    if (t > 0 && experiment != Experiment::MemoryScan && experiment != Experiment::BoundOnly)
      fail("tau_max", fmt::format("{} is memoryless, tau_max must be 0", to_string(experiment)));
  }
  if (n_photon_ops.empty()) fail("n_photon_ops", "list must be nonempty");
  for (int k : n_photon_ops) {
    if (k < 0) fail("n_photon_ops", "must be >= 0");
    if (static_cast<std::size_t>(k) > max_string_length)
      fail("n_photon_ops", fmt::format("{} exceeds wick.max_string_length = {}", k, max_string_length));
  }
  if (ensemble_sizes.empty()) fail("ensemble_size", "list must be nonempty");
  for (double m : ensemble_sizes) {
    if (m == 0.0) continue;
    if (!(m >= 2.0) || !std::isfinite(m)) fail("ensemble_size", "must be 'exact' or a finite number >= m + 2");
    for (int n : n_modes)
      if (m < n * (n + 1) / 2 + 2.0)
        fail("ensemble_size", fmt::format("M = {} is below m + 2 = {} for N = {}", m, n * (n + 1) / 2 + 2, n));
  }
  if (realizations < 1) fail("realizations", "must be >= 1");
  if (!(squeezing >= 0.0) || !std::isfinite(squeezing)) fail("squeezing", "must be >= 0");
  if (phases.train == 0) fail("phases.train", "must be positive");
  if (phases.test == 0) fail("phases.test", "must be positive");
  for (int t : tau_max) {
    const int memory = std::max(t, truncation(t).max_delay);
    if (phases.washout < static_cast<std::size_t>(memory))
      fail("phases.washout", fmt::format("must cover the encoding and basis memory ({} steps)", memory));
  }
  if (max_total_degree < 1) fail("basis.max_total_degree", "must be >= 1");
  if (max_delay && *max_delay < 0) fail("basis.max_delay", "must be >= 0");
  if (max_factors < 1) fail("basis.max_factors", "must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) fail("threshold.p", "must lie in (0, 1]");
  if (!(rho >= 0.0 && rho <= 1.0)) fail("leaky.rho", "must lie in [0, 1]");
  if (max_string_length < 1 || max_string_length > 10) fail("wick.max_string_length", "must lie in 1..10");
}

namespace {

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

template <class T, class F>
std::string yaml_list(const std::vector<T>& v, F&& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out + "]";
}

std::string ensemble_label(double m) { return m == 0.0 ? "exact" : fmt_double(m); }

}  // namespace

std::string ExperimentConfig::canonical() const {
  std::string s;
  s += fmt::format("experiment: {}\n", to_string(experiment));
  s += fmt::format("n_modes: {}\n", yaml_list(n_modes, [](int v) { return std::to_string(v); }));
  s += fmt::format("tau_max: {}\n", yaml_list(tau_max, [](int v) { return std::to_string(v); }));
  s += fmt::format("n_photon_ops: {}\n", yaml_list(n_photon_ops, [](int v) { return std::to_string(v); }));
  s += fmt::format("op_kind: {}\n", to_string(op_kind));
  s += fmt::format("ensemble_size: {}\n", yaml_list(ensemble_sizes, ensemble_label));
  s += fmt::format("realizations: {}\n", realizations);
  s += fmt::format("seed: {}\n", seed);
  s += fmt::format("identical_modes: {}\n", identical_modes);
  s += fmt::format("squeezing: {}\n", fmt_double(squeezing));
  s += fmt::format("phases:\n  washout: {}\n  train: {}\n  test: {}\n", phases.washout, phases.train, phases.test);
  s += fmt::format("basis:\n  max_total_degree: {}\n", max_total_degree);
  if (max_delay) s += fmt::format("  max_delay: {}\n", *max_delay);
  s += fmt::format("  max_factors: {}\n", max_factors);
  s += fmt::format("threshold:\n  p: {}\n", fmt_double(p));
  s += fmt::format("leaky:\n  rho: {}\n  mode: {}\n", fmt_double(rho), to_string(leak_mode));
  s += fmt::format("network:\n  kind: {}\n", to_string(network));
  s += fmt::format("wick:\n  max_string_length: {}\n", max_string_length);
  return s;
}

std::uint64_t ExperimentConfig::hash() const { return purpose_tag(canonical()); }

// ---------------------------------------------------------------- parsing

std::string suggest_key(const std::string& key, const std::vector<std::string>& candidates) {
  auto distance = [](const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      cur[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j)
        cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
      std::swap(prev, cur);
    }
    return prev[b.size()];
  };
  std::string best;
  std::size_t best_d = std::max<std::size_t>(3, key.size() / 2) + 1;
  for (const std::string& c : candidates) {
    const std::size_t d = distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

namespace {

class ConfigReader {
 public:
  explicit ConfigReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const YAML::Mark m = node.Mark();
    if (m.is_null()) throw ConfigError(fmt::format("{}: {}", source_, msg));
    throw ConfigError(fmt::format("{}: line {}, column {}: {}", source_, m.line + 1, m.column + 1, msg));
  }

  void check_keys(const YAML::Node& map, const std::vector<std::string>& allowed, const std::string& prefix) const {
    if (!map.IsMap()) fail(map, fmt::format("'{}' must be a mapping", prefix.empty() ? "config" : prefix));
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      const std::string hint = suggest_key(key, allowed);
      const std::string full = prefix.empty() ? key : prefix + "." + key;
      fail(kv.first, hint.empty() ? fmt::format("unknown key '{}'", full)
                                  : fmt::format("unknown key '{}', did you mean '{}'?", full, hint));
    }
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& key, std::string_view expected) const {
    if (!node.IsScalar()) fail(node, fmt::format("key '{}' expects {}", key, expected));
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, fmt::format("key '{}' expects {}, got '{}'", key, expected, node.Scalar()));
    }
  }

  std::vector<int> int_list(const YAML::Node& node, const std::string& key) const {
    std::vector<int> out;
    if (node.IsSequence()) {
      for (const auto& item : node) out.push_back(scalar<int>(item, key, "an integer or a list of integers"));
      if (out.empty()) fail(node, fmt::format("key '{}' must not be an empty list", key));
    } else {
      out.push_back(scalar<int>(node, key, "an integer or a list of integers"));
    }
    return out;
  }

  double ensemble_entry(const YAML::Node& node) const {
    if (node.IsScalar() && node.Scalar() == "exact") return 0.0;
    return scalar<double>(node, "ensemble_size", "'exact' or a number");
  }

  std::vector<double> ensemble_list(const YAML::Node& node) const {
    std::vector<double> out;
    if (node.IsSequence()) {
      for (const auto& item : node) out.push_back(ensemble_entry(item));
      if (out.empty()) fail(node, "key 'ensemble_size' must not be an empty list");
    } else {
      out.push_back(ensemble_entry(node));
    }
    return out;
  }

  template <class E>
  E choice(const YAML::Node& node, const std::string& key, const std::vector<std::pair<std::string, E>>& options) const {
    const auto v = scalar<std::string>(node, key, "a string");
    std::vector<std::string> names;
    for (const auto& [name, value] : options) {
      if (name == v) return value;
      names.push_back(name);
    }
    const std::string hint = suggest_key(v, names);
    fail(node, fmt::format("key '{}': unknown value '{}'{}", key, v,
                           hint.empty() ? std::string{} : fmt::format(", did you mean '{}'?", hint)));
  }

 private:
  std::string source_;
};

const std::vector<std::pair<std::string, Experiment>> kExperiments = {
    {"qelm_scan", Experiment::QelmScan},   {"memory_scan", Experiment::MemoryScan},
    {"leaky_scan", Experiment::LeakyScan}, {"finite_resources", Experiment::FiniteResources},
    {"bound_only", Experiment::BoundOnly}, {"oracle_check", Experiment::OracleCheck}};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}: line {}, column {}: {}", source, e.mark.line + 1, e.mark.column + 1, e.msg));
  }
  const ConfigReader rd(source);
  if (!root.IsMap()) throw ConfigError(fmt::format("{}: expected a mapping of configuration keys", source));
  rd.check_keys(root,
                {"experiment", "n_modes", "tau_max", "n_photon_ops", "op_kind", "ensemble_size", "realizations", "seed",
                 "identical_modes", "squeezing", "phases", "basis", "threshold", "leaky", "network", "wick"},
                "");
  if (!root["experiment"]) throw ConfigError(fmt::format("{}: missing required key 'experiment'", source));
  ExperimentConfig c = ExperimentConfig::defaults_for(rd.choice(root["experiment"], "experiment", kExperiments));

  if (const auto n = root["n_modes"]) c.n_modes = rd.int_list(n, "n_modes");
  else if (c.experiment != Experiment::OracleCheck)
    throw ConfigError(fmt::format("{}: missing required key 'n_modes'", source));
  if (const auto n = root["tau_max"]) c.tau_max = rd.int_list(n, "tau_max");
  if (const auto n = root["n_photon_ops"]) c.n_photon_ops = rd.int_list(n, "n_photon_ops");
  if (const auto n = root["op_kind"])
    c.op_kind = rd.choice(n, "op_kind", std::vector<std::pair<std::string, PhotonOp>>{{"subtract", PhotonOp::Subtract},
                                                                                        {"add", PhotonOp::Add}});
  if (const auto n = root["ensemble_size"]) c.ensemble_sizes = rd.ensemble_list(n);
  if (const auto n = root["realizations"]) c.realizations = rd.scalar<int>(n, "realizations", "an integer");
  if (const auto n = root["seed"]) c.seed = rd.scalar<std::uint64_t>(n, "seed", "an unsigned 64-bit integer");
  if (const auto n = root["identical_modes"]) c.identical_modes = rd.scalar<bool>(n, "identical_modes", "a boolean");
  if (const auto n = root["squeezing"]) c.squeezing = rd.scalar<double>(n, "squeezing", "a number");
  if (const auto n = root["phases"]) {
    rd.check_keys(n, {"washout", "train", "test"}, "phases");
    auto len = [&](const char* key, std::size_t& dst) {
      if (const auto v = n[key]) {
        const long long x = rd.scalar<long long>(v, fmt::format("phases.{}", key), "a nonnegative integer");
        if (x < 0) rd.fail(v, fmt::format("key 'phases.{}' must be nonnegative", key));
        dst = static_cast<std::size_t>(x);
      }
    };
    len("washout", c.phases.washout);
    len("train", c.phases.train);
    len("test", c.phases.test);
  }
  if (const auto n = root["basis"]) {
    rd.check_keys(n, {"max_total_degree", "max_delay", "max_factors"}, "basis");
    if (const auto v = n["max_total_degree"]) c.max_total_degree = rd.scalar<int>(v, "basis.max_total_degree", "an integer");
    if (const auto v = n["max_delay"]) c.max_delay = rd.scalar<int>(v, "basis.max_delay", "an integer");
    if (const auto v = n["max_factors"]) c.max_factors = rd.scalar<int>(v, "basis.max_factors", "an integer");
  }
  if (const auto n = root["threshold"]) {
    rd.check_keys(n, {"p"}, "threshold");
    if (const auto v = n["p"]) c.p = rd.scalar<double>(v, "threshold.p", "a number");
  }
  if (const auto n = root["leaky"]) {
    rd.check_keys(n, {"rho", "mode"}, "leaky");
    if (const auto v = n["rho"]) c.rho = rd.scalar<double>(v, "leaky.rho", "a number");
    if (const auto v = n["mode"])
      c.leak_mode = rd.choice(v, "leaky.mode", std::vector<std::pair<std::string, LeakMode>>{
                                                   {"broadcast", LeakMode::Broadcast}, {"elementwise", LeakMode::Elementwise}});
  }
  if (const auto n = root["network"]) {
    rd.check_keys(n, {"kind"}, "network");
    if (const auto v = n["kind"])
      c.network = rd.choice(v, "network.kind", std::vector<std::pair<std::string, NetworkKind>>{
                                                   {"passive", NetworkKind::Passive}, {"active", NetworkKind::Active}});
  }
  if (const auto n = root["wick"]) {
    rd.check_keys(n, {"max_string_length"}, "wick");
    if (const auto v = n["max_string_length"]) {
      const int len = rd.scalar<int>(v, "wick.max_string_length", "an integer");
      if (len < 1) rd.fail(v, "key 'wick.max_string_length' must be >= 1");
      c.max_string_length = static_cast<std::size_t>(len);
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

// ---------------------------------------------------------------- running

std::vector<GridPoint> grid_points(const ExperimentConfig& cfg) {
  std::vector<GridPoint> out;
  if (cfg.experiment == Experiment::OracleCheck) return out;
  const bool bound_only = cfg.experiment == Experiment::BoundOnly;
  const std::vector<int> ops = bound_only ? std::vector<int>{0} : cfg.n_photon_ops;
  const std::vector<double> ms = bound_only ? std::vector<double>{0.0} : cfg.ensemble_sizes;
  for (int n : cfg.n_modes)
    for (int tau : cfg.tau_max)
      for (int k : ops)
        for (double m : ms) out.push_back({n, tau, k, m});
  return out;
}

std::uint64_t realization_seed(const ExperimentConfig& cfg, const GridPoint& point, int realization, int attempt) {
  return derive_seed(cfg.seed, {purpose_tag("realization"), static_cast<std::uint64_t>(point.n_modes),
                                static_cast<std::uint64_t>(point.tau_max), static_cast<std::uint64_t>(realization),
                                static_cast<std::uint64_t>(attempt)});
}

namespace {

RealizationOutcome attempt_realization(const ExperimentConfig& cfg, const GridPoint& point, int realization,
                                       int attempt) {
  const std::uint64_t seed = realization_seed(cfg, point, realization, attempt);
  const InputSeries input = generate_input(cfg.phases, seed);
  const EncodingConfig enc = make_encoding(point.n_modes, cfg.squeezing, point.tau_max, seed, cfg.identical_modes);
  const std::vector<BasisFunction> basis = enumerate_basis(cfg.truncation(point.tau_max));
  const CapacityReport bound = gaussian_bound_report(enc, input, basis, cfg.p);

  RealizationOutcome out;
  ResultRow& row = out.row;
  row.realization = realization;
  row.n_modes = point.n_modes;
  row.tau_max = point.tau_max;
  row.n_ops = point.n_ops;
  row.ensemble_size = point.ensemble_size;
  row.bound = bound.total;
  row.seed = seed;
  row.version = RIPC_VERSION;
  row.config_hash = cfg.hash();

  if (cfg.experiment == Experiment::BoundOnly) {
    row.scheme = "bound";
    row.per_delay = bound.per_delay;
    row.per_degree = bound.per_degree;
    row.cross_term_total = bound.cross_term_total;
    row.threshold = bound.threshold;
    return out;
  }

  const SymplecticMatrix network = cfg.network == NetworkKind::Passive
                                       ? random_passive_symplectic(point.n_modes, seed)
                                       : random_active_symplectic(point.n_modes, seed);
  SchemeConfig sc;
  sc.kind = cfg.scheme();
  sc.n_modes = point.n_modes;
  sc.n_photon_ops = point.n_ops;
  sc.op_kind = cfg.op_kind;
  sc.tau_max = point.tau_max;
  sc.rho = cfg.rho;
  sc.leak_mode = cfg.leak_mode;
  if (sc.kind == SchemeKind::QrcLeaky) sc.leak_vector = draw_leak_vector(point.n_modes * (point.n_modes + 1) / 2, seed);
  sc.wick.max_string_length = cfg.max_string_length;
  if (point.ensemble_size > 0.0) {
    sc.sampling.enabled = true;
    sc.sampling.ensemble_size = point.ensemble_size;
    sc.sampling.seed =
        derive_seed(seed, {purpose_tag("sampling"), static_cast<std::uint64_t>(point.n_ops),
                           std::bit_cast<std::uint64_t>(point.ensemble_size)});
  }
  const SchemeOutput features = run_scheme(sc, enc, network, input);
  const CapacityReport rep = ipc_suite(features.features, input, basis, cfg.p);

  row.scheme = std::string(to_string(sc.kind));
  row.total = rep.total;
  row.delta_c = excess_capacity(rep.total, bound.total);
  row.per_delay = rep.per_delay;
  row.per_degree = rep.per_degree;
  row.cross_term_total = rep.cross_term_total;
  row.threshold = rep.threshold;
  out.regularized_draws = features.regularized_draws;
  return out;
}

}  // namespace

RealizationOutcome run_realization(const ExperimentConfig& cfg, const GridPoint& point, int realization) {
  try {
    return attempt_realization(cfg, point, realization, 0);
  } catch (const HeraldingImpossible&) {
    RealizationOutcome out = attempt_realization(cfg, point, realization, 1);
    out.heralding_resamples = 1;
    return out;
  }
}

SummaryStat summarize(const std::vector<double>& values) {
  SummaryStat s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.standard_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  if (cfg.experiment == Experiment::OracleCheck)
    throw InvalidArgument("run_experiment: oracle_check is served by run_oracle_checks");
  const std::vector<GridPoint> grid = grid_points(cfg);
  const std::size_t reps = static_cast<std::size_t>(cfg.realizations);
  const std::size_t tasks = grid.size() * reps;

  std::vector<std::optional<RealizationOutcome>> outcomes(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      try {
        outcomes[i] = run_realization(cfg, grid[i / reps], static_cast<int>(i % reps));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentResult result;
  result.config = cfg;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> bound, total, delta, cross;
    GridSummary gs;
    gs.point = grid[g];
    for (std::size_t r = 0; r < reps; ++r) {
      const RealizationOutcome& o = *outcomes[g * reps + r];
      result.rows.push_back(o.row);
      result.heralding_resamples += o.heralding_resamples;
      result.regularized_draws += o.regularized_draws;
      gs.scheme = o.row.scheme;
      bound.push_back(o.row.bound);
      cross.push_back(o.row.cross_term_total);
      if (o.row.total) total.push_back(*o.row.total);
      if (o.row.delta_c) delta.push_back(*o.row.delta_c);
    }
    gs.bound = summarize(bound);
    gs.total = summarize(total);
    gs.delta_c = summarize(delta);
    gs.cross_term_total = summarize(cross);
    result.summary.push_back(gs);
  }
  return result;
}

// ---------------------------------------------------------------- output

namespace {

std::string flatten(const std::map<int, double>& m) {
  std::string out;
  for (const auto& [k, v] : m) out += fmt::format("{}{}:{}", out.empty() ? "" : ";", k, fmt_double(v));
  return out;
}

std::string optional_double(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string{}; }

nlohmann::ordered_json stat_json(const SummaryStat& s) {
  return {{"mean", s.mean}, {"standard_error", s.standard_error}, {"count", s.count}};
}

}  // namespace

std::string emit_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "realization,scheme,N,tau_max,n_ops,M,bound,total,delta_c,per_delay,per_degree,cross_term_total,threshold,seed,"
      "version,config_hash\n";
  for (const ResultRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:016x}\n", r.realization, r.scheme, r.n_modes,
                       r.tau_max, r.n_ops, ensemble_label(r.ensemble_size), fmt_double(r.bound),
                       optional_double(r.total), optional_double(r.delta_c), flatten(r.per_delay),
                       flatten(r.per_degree), fmt_double(r.cross_term_total), fmt_double(r.threshold), r.seed,
                       r.version, r.config_hash);
  }
  return out;
}

std::string emit_summary(const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  nlohmann::ordered_json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["software_version"] = RIPC_VERSION;
  j["config_hash"] = fmt::format("{:016x}", c.hash());
  j["config"] = c.canonical();
  j["conventions"] = {
      {"quadratures", "x = a + a^dagger, p = (a - a^dagger)/i, vacuum covariance = identity"},
      {"squeezing_rotation", "R(phi/2) diag(e^{2r}, e^{-2r}) R(phi/2)^T"},
      {"coefficient_interval", "uniform on [0.1, 2 pi] / max(tau_max, 1)"},
      {"photon_operations", "placed on modes 1, 2, ... in order, wrapping around N"},
      {"leak_mode", std::string(to_string(c.leak_mode))},
      {"threshold", "chi-squared quantile(1 - p, dof = readout feature rank) / T_train"},
      {"bound_under_sampling", "bound uses exact preprocessing features"},
  };
  nlohmann::ordered_json trunc = nlohmann::ordered_json::array();
  for (int tau : c.tau_max) {
    const BasisTruncation t = c.truncation(tau);
    trunc.push_back({{"tau_max", tau},
                     {"max_total_degree", t.max_total_degree},
                     {"max_delay", t.max_delay},
                     {"max_factors", t.max_factors},
                     {"basis_size", enumerate_basis(t).size()}});
  }
  j["basis_truncation"] = trunc;
  j["heralding_resamples"] = result.heralding_resamples;
  j["regularized_draws"] = result.regularized_draws;
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const GridSummary& g : result.summary) {
    nlohmann::ordered_json p{{"scheme", g.scheme},
                             {"N", g.point.n_modes},
                             {"tau_max", g.point.tau_max},
                             {"n_ops", g.point.n_ops},
                             {"M", ensemble_label(g.point.ensemble_size)},
                             {"bound", stat_json(g.bound)}};
    if (g.total.count) {
      p["total"] = stat_json(g.total);
      p["delta_c"] = stat_json(g.delta_c);
    }
    p["cross_term_total"] = stat_json(g.cross_term_total);
    points.push_back(std::move(p));
  }
  j["grid"] = std::move(points);
  return j.dump(2) + "\n";
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", p.string()));
    out << content;
  };
  write(dir / "results.csv", emit_csv(result.rows));
  write(dir / "summary.json", emit_summary(result));
}

}  // namespace ripc
