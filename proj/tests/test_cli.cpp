#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cournot/cli/commands.hpp"
#include "cournot/cli/config.hpp"
#include "cournot/report.hpp"

using namespace cournot;
using namespace cournot::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("cournot-test-" + std::to_string(std::random_device{}()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

int error_line(const std::string& yaml) {
  try {
    parse_config(yaml, "t.yaml");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_key(const std::string& yaml) {
  try {
    parse_config(yaml, "t.yaml");
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config gives the default duopoly") {
  const auto cfg = parse_config("");
  CHECK(cfg.market.firms == 2);
  CHECK(cfg.policies.size() == 2);
  CHECK(cfg.pattern == DemandPattern::Stationary);
}

TEST_CASE("full config") {
  const auto cfg = parse_config(R"(
preset: duopoly-pattern1
market:
  firms: 3
  costs: [1, 2, 3]
  v: 0.5
  u_s: 60
  arms: 30
demand:
  pattern: pattern3
  gamma: 0.02
  shock_mu: 1.1
  shock_sigma: 0.1
simulation:
  steps: 5000
  seed: 17
  log_window: 50
  q_init_scale: 2.5
  full_log: true
policies:
  - {kind: awe, memory: 5, sigma_floor: 1.0}
  - {kind: vanilla, epsilon: 0.2, alpha: 0.05}
  - {kind: adaptive, alpha: 0.2}
)");
  CHECK(cfg.market.costs == std::vector<double>{1, 2, 3});
  CHECK(cfg.market.slope == 0.5);
  CHECK(cfg.market.arms == 30);
  CHECK(cfg.pattern == DemandPattern::Pattern3);
  CHECK(cfg.gamma == 0.02);
  CHECK(cfg.steps == 5000);
  CHECK(cfg.master_seed == 17);
  CHECK(cfg.log_window == 50);
  CHECK(cfg.q_init_scale == 2.5);
  CHECK(cfg.full_log);
  REQUIRE(cfg.policies.size() == 3);
  CHECK(std::get<AweParams>(cfg.policies[0]).memory == 5);
  CHECK(std::get<VanillaParams>(cfg.policies[1]).epsilon == 0.2);
  CHECK(std::get<AdaptiveParams>(cfg.policies[2]).alpha == 0.2);
}

TEST_CASE("scalar cost and shared policy") {
  const auto cfg = parse_config("market: {firms: 4, costs: 7}\npolicy: {kind: vanilla}\n"
                                "simulation: {q_init_scale: auto}\n");
  CHECK(cfg.market.costs == std::vector<double>(4, 7.0));
  CHECK(cfg.policies.size() == 4);
  CHECK(std::holds_alternative<VanillaParams>(cfg.policies[3]));
  CHECK(cfg.q_init_scale == 0.0);
}

TEST_CASE("firm count change keeps symmetric preset costs") {
  const auto cfg = parse_config("preset: ten-firm\nmarket:\n  firms: 12\n");
  CHECK(cfg.market.costs == std::vector<double>(12, 10.0));
  CHECK(cfg.policies.size() == 12);
  CHECK(error_key("preset: asym-duopoly\nmarket:\n  firms: 3\n") == "market.firms");
}

TEST_CASE("config errors carry key and line") {
  CHECK(error_line("demand:\n  pattern: pattern7\n") == 2);
  CHECK(error_key("demand:\n  pattern: pattern7\n") == "demand.pattern");
  CHECK(error_key("market:\n  firm: 3\n") == "market.firm");
  CHECK(error_line("market:\n  firm: 3\n") == 2);
  CHECK(error_key("simulaton: {}\n") == "simulaton");
  CHECK(error_key("market:\n  arms: 1\n") == "market.arms");
  CHECK(error_key("market:\n  arms: many\n") == "market.arms");
  CHECK(error_key("market:\n  arms: 2.5\n") == "market.arms");
  CHECK(error_key("market:\n  costs: [1, 2, 3]\n") == "market.costs");
  CHECK(error_key("simulation:\n  steps: 0\n") == "simulation.steps");
  CHECK(error_key("simulation:\n  q_init_scale: -1\n") == "simulation.q_init_scale");
  CHECK(error_key("demand:\n  gamma: 2\n") == "demand.gamma");
  CHECK(error_key("policy:\n  kind: ucb\n") == "policy.kind");
  CHECK(error_key("policy:\n  kind: vanilla\n  eps_min: 0.1\n") == "policy.eps_min");
  CHECK(error_key("policy:\n  eps_min: 0.4\n") == "policy");
  CHECK(error_line("x\n\nmarket: [1,\n") > 0);
  CHECK(error_key("policies:\n  - kind: awe\n") == "policies");
  CHECK(error_key("preset: nope\n") == "preset");

  try {
    parse_config("\n\ndemand:\n  pattern: zigzag\n", "exp.yaml");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("exp.yaml:4: demand.pattern: unknown pattern 'zigzag'", 0) == 0);
  }
}

TEST_CASE("seed lists") {
  CHECK(parse_seed_list("1..5") == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(parse_seed_list("7") == std::vector<std::uint64_t>{7});
  CHECK(parse_seed_list("3,1,2") == std::vector<std::uint64_t>{3, 1, 2});
  CHECK(parse_seed_list("4..4") == std::vector<std::uint64_t>{4});
  CHECK_THROWS_AS(parse_seed_list("1..0"), ConfigError);
  CHECK_THROWS_AS(parse_seed_list(""), ConfigError);
  CHECK_THROWS_AS(parse_seed_list("a..b"), ConfigError);
  CHECK_THROWS_AS(parse_seed_list("1,,2"), ConfigError);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("atomic write replaces the file and leaves no temp") {
  TempDir dir;
  const auto p = dir.path / "f.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  CHECK(slurp(p) == "two");
  CHECK(std::distance(fs::directory_iterator(dir.path), fs::directory_iterator{}) == 1);
}

TEST_CASE("real formatting") {
  CHECK(format_real(0.0) == "0");
  CHECK(format_real(24.0) == "24");
  CHECK(format_real(1.0 / 3.0) == "0.333333333");
  CHECK(format_real(1234567.891) == "1234567.89");
  CHECK(format_real(-0.5) == "-0.5");
}

TEST_CASE("run writes the artifacts") {
  TempDir dir;
  const auto cfg = write(dir.path / "exp.yaml",
                         "preset: duopoly-pattern1\nsimulation:\n  steps: 3000\n");
  RunOptions opts;
  opts.source.config_path = cfg;
  opts.out_dir = dir.path / "run";
  opts.full_log = true;
  opts.diagnostics = true;
  std::ostringstream out, err;
  REQUIRE(cmd_run(opts, out, err) == kExitOk);

  const auto series = slurp(opts.out_dir / "series.csv");
  CHECK(series.rfind("window_start,u_mean,joint_q,joint_profit,collusive_q,nash_q,walras_q,", 0) == 0);
  CHECK(series.find('\r') == std::string::npos);
  CHECK(std::count(series.begin(), series.end(), '\n') == 31);

  const auto manifest = nlohmann::json::parse(slurp(opts.out_dir / "manifest.json"));
  CHECK(manifest["config"]["sha256"] == sha256_hex(slurp(cfg)));
  for (const auto& f : manifest["files"]) CHECK(fs::exists(opts.out_dir / f.get<std::string>()));
  CHECK(manifest["files"].size() == 5);

  const auto summary = nlohmann::json::parse(slurp(opts.out_dir / "summary.json"));
  CHECK(summary["steps"] == 3000);
  CHECK(summary["recovery_times"].size() == 3);

  // same config and seed, byte-identical series
  opts.out_dir = dir.path / "again";
  REQUIRE(cmd_run(opts, out, err) == kExitOk);
  CHECK(slurp(opts.out_dir / "series.csv") == series);

  opts.seed = 99;
  opts.out_dir = dir.path / "other";
  REQUIRE(cmd_run(opts, out, err) == kExitOk);
  CHECK(slurp(opts.out_dir / "series.csv") != series);
}

TEST_CASE("run exit codes") {
  TempDir dir;
  std::ostringstream out, err;
  RunOptions opts;
  opts.out_dir = dir.path / "x";
  opts.source.config_path = write(dir.path / "bad.yaml", "demand:\n  pattern: pattern7\n");
  CHECK(cmd_run(opts, out, err) == kExitConfig);
  CHECK(err.str().find("demand.pattern") != std::string::npos);

  opts.source.config_path = dir.path / "missing.yaml";
  CHECK(cmd_run(opts, out, err) == kExitConfig);

  opts.source.config_path.reset();
  opts.source.preset = "duopoly-stationary";
  write(dir.path / "blocker", "file");
  opts.out_dir = dir.path / "blocker" / "sub";
  CHECK(cmd_run(opts, out, err) == kExitRuntime);
}

TEST_CASE("sweep is independent of the job count") {
  TempDir dir;
  const auto cfg = write(dir.path / "exp.yaml",
                         "preset: duopoly-pattern1\nsimulation:\n  steps: 4000\n");
  std::ostringstream out, err;
  SweepCmdOptions opts;
  opts.source.config_path = cfg;
  opts.seeds = "1..5";
  opts.jobs = 1;
  opts.out_dir = dir.path / "j1";
  REQUIRE(cmd_sweep(opts, out, err) == kExitOk);
  opts.jobs = 4;
  opts.out_dir = dir.path / "j4";
  REQUIRE(cmd_sweep(opts, out, err) == kExitOk);

  for (int s = 1; s <= 5; ++s) {
    const auto name = "seed_" + std::to_string(s);
    CHECK(slurp(dir.path / "j1" / name / "series.csv") == slurp(dir.path / "j4" / name / "series.csv"));
    CHECK(slurp(dir.path / "j1" / name / "summary.json") ==
          slurp(dir.path / "j4" / name / "summary.json"));
  }
  CHECK(slurp(dir.path / "j1" / "aggregate.json") == slurp(dir.path / "j4" / "aggregate.json"));
  const auto agg = nlohmann::json::parse(slurp(dir.path / "j4" / "aggregate.json"));
  CHECK(agg["succeeded"] == 5);
  CHECK(agg["runs"].size() == 5);
  CHECK(agg["median"].contains("band_occupancy"));
  CHECK(agg["median"]["recovery_times"].size() == 3);

  opts.seeds = "1..0";
  CHECK(cmd_sweep(opts, out, err) == kExitConfig);
}

TEST_CASE("presets listing") {
  std::ostringstream out;
  CHECK(cmd_presets(out) == kExitOk);
  const auto text = out.str();
  CHECK(text.find("duopoly: u_s=40 c=4 v=1") != std::string::npos);
  CHECK(text.find("fifty-firm: n=50 K=50 c=20 u_s=1000") != std::string::npos);
  CHECK(text.find("asym-duopoly: c=[1,3]") != std::string::npos);
}

TEST_CASE("demand export") {
  TempDir dir;
  DemandCmdOptions opts;
  opts.source.preset = "duopoly-pattern1";
  std::ostringstream out, err;
  REQUIRE(cmd_demand(opts, out, err) == kExitOk);
  const auto csv = out.str();
  CHECK(csv.rfind("t,u\n0,40\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 100001);
  CHECK(csv.find("\n33333,20\n") != std::string::npos);

  opts.out = dir.path / "d" / "demand.csv";
  REQUIRE(cmd_demand(opts, out, err) == kExitOk);
  CHECK(slurp(*opts.out) == csv);
}

TEST_CASE("shipped configs parse") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(COURNOT_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".yaml") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
    ++seen;
  }
  CHECK(seen >= 3);
}
