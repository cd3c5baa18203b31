// reservoir-ipc: command-line front end of the experiment runner.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ripc/error.hpp"
#include "ripc/oracle.hpp"
#include "ripc/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

unsigned resolve_jobs(std::optional<unsigned> flag) {
  if (flag) return std::max(1u, *flag);
  if (const char* env = std::getenv("RESERVOIR_IPC_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ripc::ConfigError(fmt::format("RESERVOIR_IPC_JOBS='{}' is not an integer", env));
    }
  }
  return 1;
}

std::filesystem::path resolve_out(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RESERVOIR_IPC_OUT")) return env;
  return "results";
}

int oracle_check() {
  std::size_t failed = 0;
  fmt::print("{:<6} {:>6}  {:<52} {:>11} {:>9}\n", "status", "cutoff", "case", "error", "tolerance");
  for (const ripc::OracleCaseResult& c : ripc::run_oracle_checks()) {
    failed += c.passed ? 0 : 1;
    fmt::print("{:<6} {:>6}  {:<52} {:>11.3e} {:>9.0e}  {}\n", c.passed ? "PASS" : "FAIL",
               c.cutoff ? std::to_string(c.cutoff) : "-", c.name, c.error, c.tolerance, c.detail);
  }
  fmt::print("{} failing case(s)\n", failed);
  return failed ? kExitNumerical : kExitOk;
}

int run(const std::string& config_path, const std::optional<std::string>& out, std::optional<std::uint64_t> seed,
        std::optional<unsigned> jobs) {
  ripc::ExperimentConfig cfg = ripc::load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (cfg.experiment == ripc::Experiment::OracleCheck) return oracle_check();
  const unsigned n_jobs = resolve_jobs(jobs);
  const std::filesystem::path dir = resolve_out(out);
  const ripc::ExperimentResult result = ripc::run_experiment(cfg, n_jobs);
  ripc::write_outputs(result, dir);
  for (const ripc::GridSummary& g : result.summary) {
    fmt::print("{:<18} N={} tau_max={} n_ops={} M={}  bound {:.4f} +- {:.4f}", g.scheme, g.point.n_modes,
               g.point.tau_max, g.point.n_ops, g.point.ensemble_size == 0.0 ? "exact" : fmt::format("{:g}", g.point.ensemble_size),
               g.bound.mean, g.bound.standard_error);
    if (g.total.count)
      fmt::print("  total {:.4f} +- {:.4f}  dC {:+.4f} +- {:.4f}", g.total.mean, g.total.standard_error,
                 g.delta_c.mean, g.delta_c.standard_error);
    fmt::print("\n");
  }
  fmt::print("wrote {} rows to {}\n", result.rows.size(), (dir / "results.csv").string());
  return kExitOk;
}

int bound(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<unsigned> jobs) {
  ripc::ExperimentConfig cfg = ripc::load_config(config_path);
  if (seed) cfg.seed = *seed;
  cfg.experiment = ripc::Experiment::BoundOnly;
  const ripc::ExperimentResult result = ripc::run_experiment(cfg, resolve_jobs(jobs));
  for (const ripc::GridSummary& g : result.summary)
    fmt::print("N={} tau_max={} bound {:.6f} +- {:.6f} ({} realizations)\n", g.point.n_modes, g.point.tau_max,
               g.bound.mean, g.bound.standard_error, g.bound.count);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information processing capacity of Gaussian and non-Gaussian photonic reservoirs"};
  app.set_version_flag("--version", std::string(RIPC_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write results.csv and summary.json");
  run_cmd->add_option("--config", config_path, "YAML experiment configuration")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out, "Output directory (default: $RESERVOIR_IPC_OUT or ./results)");
  run_cmd->add_option("--seed", seed, "Override the master seed");
  run_cmd->add_option("--jobs", jobs, "Worker threads (default: $RESERVOIR_IPC_JOBS or 1)");

  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the Wick engine with the truncated Fock simulator");

  auto* bound_cmd = app.add_subcommand("bound", "Print the Gaussian bound for each grid point of a config");
  bound_cmd->add_option("--config", config_path, "YAML experiment configuration")->required()->check(CLI::ExistingFile);
  bound_cmd->add_option("--seed", seed, "Override the master seed");
  bound_cmd->add_option("--jobs", jobs, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return run(config_path, out, seed, jobs);
    if (*oracle_cmd) return oracle_check();
    if (*bound_cmd) return bound(config_path, seed, jobs);
  } catch (const ripc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ripc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ripc::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
