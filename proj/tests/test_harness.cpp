#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gtflow/harness.hpp"

using namespace gtflow;
using nlohmann::json;

namespace {

const ExperimentKind kAllKinds[] = {ExperimentKind::verify,          ExperimentKind::converge_kernel,
                                    ExperimentKind::converge_density, ExperimentKind::mc_correlations,
                                    ExperimentKind::spectrum,         ExperimentKind::export_paths};

ExperimentConfig parsed(ExperimentKind kind, const std::string& text) {
  return ExperimentConfig::from_json(kind, json::parse(text));
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gtflow-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(GTFLOW_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("experiment names round-trip") {
  for (auto k : kAllKinds) CHECK(experiment_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(experiment_from_string("nope"), ConfigError);
}

TEST_CASE("defaults validate where no seed is required") {
  for (auto k : kAllKinds) {
    ExperimentConfig c = ExperimentConfig::defaults(k);
    if (k == ExperimentKind::mc_correlations || k == ExperimentKind::export_paths) {
      CHECK_THROWS_AS(c.validate(), ConfigError);
      c.seed = 5;
    }
    CHECK_NOTHROW(c.validate());
  }
}

TEST_CASE("config JSON round-trips") {
  for (auto k : kAllKinds) {
    ExperimentConfig c = ExperimentConfig::defaults(k);
    c.seed = 123;
    c.jobs = 3;
    const ExperimentConfig back = ExperimentConfig::from_json(k, c.to_json());
    CHECK(back.to_json() == c.to_json());
    CHECK_FALSE(c.to_json(false).contains("jobs"));
    CHECK_FALSE(c.to_json(false).contains("out"));
  }
}

TEST_CASE("unknown or mistyped config keys are errors") {
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"nmax": 3})"), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"params": {"q": 1}})"), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"nMax": "three"})"), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"params": {"mode": "fuzzy"}})"), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"experiment": "spectrum"})"), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"([1, 2])"), ConfigError);
  CHECK(parsed(ExperimentKind::verify, R"({"experiment": "verify", "nMax": 3})").n_max == 3);
}

TEST_CASE("inadmissible parameters are configuration errors") {
  // z' must exceed p - 1.
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"params": {"p": 2, "zPrime": 1}})").validate(), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::spectrum, R"({"params": {"wPrime": -1}})").validate(), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"params": {"mode": "float"}})").validate(), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::converge_density, R"({"params": {"mode": "exact"}})").validate(),
                  ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"nMax": 9})").validate(), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::verify, R"({"jobs": 0})").validate(), ConfigError);
}

TEST_CASE("grid points must stay inside the interior margin") {
  CHECK_THROWS_AS(parsed(ExperimentKind::converge_density, R"({"grid": [[0.02, 0.98]]})").validate(), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::converge_density, R"({"grid": [[0.6, 0.3]]})").validate(), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::converge_kernel, R"({"grid": [[0.5]]})").validate(), ConfigError);
  CHECK_NOTHROW(parsed(ExperimentKind::converge_density, R"({"grid": [[0.05, 0.95]]})").validate());
}

TEST_CASE("Monte Carlo configs need a seed, enough sweeps and an increasing ladder") {
  CHECK_THROWS_AS(parsed(ExperimentKind::mc_correlations, R"({"sweeps": 20000})").validate(), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::mc_correlations, R"({"seed": 1, "sweeps": 999})").validate(), ConfigError);
  CHECK_THROWS_AS(parsed(ExperimentKind::converge_kernel, R"({"nLadder": [100, 50]})").validate(), ConfigError);
  CHECK_NOTHROW(parsed(ExperimentKind::mc_correlations, R"({"seed": 1})").validate());
}

TEST_CASE("ladder monotonicity rule") {
  CHECK(ladder_decreasing({4, 2, 1}));
  CHECK(ladder_decreasing({4, 2, 2.1, 1}));  // one inversion within 10%
  CHECK_FALSE(ladder_decreasing({4, 2, 2.5, 1}));
  CHECK_FALSE(ladder_decreasing({4, 4.1, 2, 2.1}));
  CHECK(ladder_decreasing({1}));
}

TEST_CASE("Wilson score interval") {
  // n = 100, k = 50, z = 1.96 evaluated independently in double precision
  const auto [lo, hi] = wilson_interval(50, 100, 1.96);
  CHECK(lo == doctest::Approx(0.40382982859014716).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.5961701714098528).epsilon(1e-12));
  const auto [z0, z1] = wilson_interval(0, 1000, 3);
  CHECK(z0 == doctest::Approx(0.0));
  CHECK(z1 > 0);
  CHECK(z1 < 0.01);
}

TEST_CASE("parallel loop visits every index once") {
  for (int jobs : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("results do not depend on the worker count") {
  ExperimentConfig mc = ExperimentConfig::defaults(ExperimentKind::mc_correlations);
  mc.seed = 9;
  mc.n_ladder = {20};
  mc.sweeps = 10000;
  ExperimentConfig sp = ExperimentConfig::defaults(ExperimentKind::spectrum);
  sp.samples = 3;
  ExperimentConfig ex = ExperimentConfig::defaults(ExperimentKind::export_paths);
  ex.seed = 4;
  ex.sweeps = 3;
  for (ExperimentConfig c : {mc, sp, ex}) {
    c.jobs = 1;
    const ResultRecord a = run_experiment(c);
    c.jobs = 3;
    const ResultRecord b = run_experiment(c);
    CHECK(a.to_json(false) == b.to_json(false));
    CHECK(a.tables == b.tables);
  }
}

TEST_CASE("verify passes on its defaults") {
  const ResultRecord r = run_experiment(ExperimentConfig::defaults(ExperimentKind::verify));
  CHECK(r.passed());
  CHECK(r.checks.size() > 10);
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
    CHECK_FALSE(c.anchor.empty());
  }
}

TEST_CASE("result records are written to fresh timestamped directories") {
  const auto root = scratch_dir("records");
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::export_paths);
  c.seed = 2;
  c.n_target = 5;
  const ResultRecord r = run_experiment(c);
  CHECK(r.id.rfind("export-paths-", 0) == 0);
  const auto d1 = write_result(r, root), d2 = write_result(r, root);
  CHECK(d1 != d2);
  for (const auto& d : {d1, d2}) {
    CHECK(std::filesystem::exists(d / "result.json"));
    for (const auto& [name, text] : r.tables) CHECK(std::filesystem::file_size(d / name) == text.size());
  }
  std::ifstream is(d1 / "result.json");
  const json doc = json::parse(is);
  for (const char* key : {"experiment", "id", "version", "config", "checks", "passed", "wallClockSeconds"})
    CHECK(doc.contains(key));
  CHECK(doc["id"] == r.id);
}

TEST_CASE("command-line exit codes") {
  const auto root = scratch_dir("cli");
  const std::string out = " --out " + root.string();
  CHECK(run_cli("verify" + out) == 0);
  CHECK(run_cli("export-paths --seed 3" + out) == 0);

  // Check failure: at N = 10 the chain is far from its limit.
  const auto far = root / "far.json";
  std::ofstream(far) << R"({"nLadder": [10], "sweeps": 20000, "seed": 1})";
  CHECK(run_cli("mc-correlations --config " + far.string() + out) == 1);

  const auto bad = root / "bad.json";
  std::ofstream(bad) << R"({"sweep": 5})";
  CHECK(run_cli("mc-correlations --config " + bad.string() + out) == 2);
  const auto broken = root / "broken.json";
  std::ofstream(broken) << "{ not json";
  CHECK(run_cli("verify --config " + broken.string() + out) == 2);
  CHECK(run_cli("export-paths" + out) == 2);  // no seed
  CHECK(run_cli("verify --mode float" + out) == 2);
  CHECK(run_cli("verify --mode quad" + out) == 2);
  CHECK(run_cli("verify --config /nonexistent/cfg.json" + out) == 2);
  CHECK(run_cli("frobnicate" + out) == 2);
}
