#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ripc/error.hpp"
#include "ripc/runner.hpp"

using namespace ripc;

namespace {

const std::string kSmall = R"(experiment: qelm_scan
n_modes: [2]
n_photon_ops: [0, 1]
realizations: 3
seed: 5
phases: {washout: 0, train: 400, test: 100}
basis: {max_total_degree: 4}
)";

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ripc-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(RIPC_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("defaults per experiment") {
  const ExperimentConfig q = ExperimentConfig::defaults_for(Experiment::QelmScan);
  CHECK(q.phases == Phases{0, 5000, 1000});
  CHECK(q.max_total_degree == 8);
  const ExperimentConfig m = ExperimentConfig::defaults_for(Experiment::MemoryScan);
  CHECK(m.phases.washout == 100);
  CHECK(m.max_total_degree == 4);
  CHECK(ExperimentConfig::defaults_for(Experiment::FiniteResources).phases.train == 10000);
  CHECK(m.truncation(3).max_delay == 3);
  ExperimentConfig l = ExperimentConfig::defaults_for(Experiment::LeakyScan);
  CHECK(l.truncation(0).max_delay == 5);
  CHECK(q.truncation(0).max_factors == 1);
}

TEST_CASE("parsing and canonical round trip") {
  const ExperimentConfig c = parse_config(kSmall);
  CHECK(c.n_modes == std::vector<int>{2});
  CHECK(c.n_photon_ops == std::vector<int>{0, 1});
  CHECK(c.phases.train == 400);
  CHECK(c.max_total_degree == 4);
  const ExperimentConfig again = parse_config(c.canonical());
  CHECK(again.canonical() == c.canonical());
  CHECK(again.hash() == c.hash());
  ExperimentConfig other = c;
  other.seed = 6;
  CHECK(other.hash() != c.hash());
}

TEST_CASE("diagnostics") {
  const std::string typo = config_error("experiment: qelm_scan\nn_modes: [2]\ntaumax: [1]\n");
  CHECK(typo.find("line 3, column 1") != std::string::npos);
  CHECK(typo.find("did you mean 'tau_max'") != std::string::npos);
  CHECK(config_error("experiment: qelm_scan\n").find("missing required key 'n_modes'") != std::string::npos);
  CHECK(config_error("n_modes: [2]\n").find("experiment") != std::string::npos);
  CHECK(config_error("experiment: [qelm_scan\n").find("line") != std::string::npos);
  CHECK(config_error("experiment: qelm_scna\nn_modes: [2]\n").find("did you mean 'qelm_scan'") != std::string::npos);
  CHECK_FALSE(config_error("experiment: qelm_scan\nn_modes: [0]\n").empty());
  CHECK(suggest_key("n_mode", {"n_modes", "seed"}) == "n_modes");
  CHECK(suggest_key("zzzzzzzz", {"n_modes", "seed"}).empty());
}

TEST_CASE("grid and seeds") {
  const ExperimentConfig c = parse_config(kSmall);
  const auto grid = grid_points(c);
  REQUIRE(grid.size() == 2);
  CHECK(grid[1].n_ops == 1);
  // Photon-op count does not enter the realization seed.
  CHECK(realization_seed(c, grid[0], 1) == realization_seed(c, grid[1], 1));
  CHECK(realization_seed(c, grid[0], 1) != realization_seed(c, grid[0], 2));
  CHECK(realization_seed(c, grid[0], 1, 0) != realization_seed(c, grid[0], 1, 1));
}

TEST_CASE("results are deterministic and independent of thread count") {
  const ExperimentConfig c = parse_config(kSmall);
  const ExperimentResult serial = run_experiment(c, 1);
  const ExperimentResult parallel = run_experiment(c, 4);
  CHECK(emit_csv(serial.rows) == emit_csv(parallel.rows));
  CHECK(emit_summary(serial) == emit_summary(parallel));
  REQUIRE(serial.rows.size() == 6);
  for (const ResultRow& r : serial.rows) {
    CHECK(r.total.has_value());
    // Three readout features cap the total; the bound sees all six input entries.
    CHECK(*r.total <= 3.0 + 0.05);
    CHECK(r.bound <= 6.0 + 0.05);
    CHECK(*r.delta_c == doctest::Approx(*r.total - r.bound));
  }

  // One grid point run alone gives the same rows as inside the full grid.
  ExperimentConfig single = c;
  single.n_photon_ops = {1};
  const ExperimentResult alone = run_experiment(single, 1);
  for (const ResultRow& r : alone.rows) {
    bool found = false;
    for (const ResultRow& s : serial.rows)
      if (s.n_ops == 1 && s.realization == r.realization) {
        CHECK(*s.total == *r.total);
        CHECK(s.bound == r.bound);
        found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("csv layout") {
  const ExperimentResult r = run_experiment(parse_config(kSmall), 2);
  const std::string csv = emit_csv(r.rows);
  CHECK(csv.rfind("realization,scheme,N,tau_max,n_ops,M,bound,total,delta_c,per_delay,per_degree,cross_term_total,"
                  "threshold,seed,version,config_hash\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  const SummaryStat s = summarize({1.0, 2.0, 3.0});
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.standard_error == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("command line") {
  const auto dir = scratch_dir("cli");
  {
    std::ofstream(dir / "ok.yaml") << kSmall;
    std::ofstream(dir / "typo.yaml") << "experiment: qelm_scan\nn_modes: [2]\ntaumax: [1]\n";
    std::ofstream(dir / "broken.yaml") << "experiment: {qelm_scan\n";
  }
  CHECK(run_cli("run --config " + (dir / "ok.yaml").string() + " --out " + (dir / "a").string() + " --jobs 1") == 0);
  CHECK(run_cli("run --config " + (dir / "ok.yaml").string() + " --out " + (dir / "b").string() + " --jobs 3") == 0);
  CHECK(slurp(dir / "a" / "results.csv") == slurp(dir / "b" / "results.csv"));
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  CHECK(slurp(dir / "a" / "summary.json").find("\"schema_version\"") != std::string::npos);
  CHECK(run_cli("run --config " + (dir / "typo.yaml").string()) == 2);
  CHECK(run_cli("run --config " + (dir / "broken.yaml").string()) == 2);
  CHECK(run_cli("run --config " + (dir / "missing.yaml").string()) == 2);
  CHECK(run_cli("bound --config " + (dir / "ok.yaml").string()) == 0);
  CHECK(run_cli("frobnicate") == 2);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
