#include "cournot/cli/commands.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "cournot/cli/config.hpp"
#include "cournot/presets.hpp"
#include "cournot/report.hpp"
#include "cournot/sweep.hpp"

#ifndef COURNOT_VERSION
#define COURNOT_VERSION "0.0.0"
#endif

namespace cournot::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::system_clock;

namespace {

struct Loaded {
  SimConfig cfg;
  json origin;  ///< path or preset, plus sha256
};

Loaded load_source(const ConfigSource& source) {
  if (source.config_path.has_value() == source.preset.has_value())
    throw ConfigError("command line", 0, "--config", "give exactly one of --config or --preset");
  Loaded loaded;
  if (source.preset) {
    loaded.cfg = preset_config(*source.preset);
    loaded.origin = {{"preset", *source.preset},
                     {"sha256", sha256_hex(config_json(loaded.cfg))}};
    return loaded;
  }
  const auto& path = *source.config_path;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "--config", "cannot read file");
  std::ostringstream text;
  text << in.rdbuf();
  loaded.cfg = parse_config(text.str(), path.string());
  loaded.origin = {{"path", fs::absolute(path).lexically_normal().string()},
                   {"sha256", sha256_hex(text.str())}};
  return loaded;
}

std::string iso8601(Clock::time_point tp) {
  const std::time_t t = Clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <class Writer>
std::string render(Writer&& write) {
  std::ostringstream os;
  write(os);
  return std::move(os).str();
}

json manifest(const std::string& command, const json& origin, const fs::path& dir,
              const std::vector<std::string>& files, Clock::time_point started,
              Clock::time_point finished) {
  return {
      {"tool", "cournot-sim"},
      {"version", COURNOT_VERSION},
      {"command", command},
      {"config", origin},
      {"out_dir", fs::absolute(dir).lexically_normal().string()},
      {"files", files},
      {"started_at", iso8601(started)},
      {"finished_at", iso8601(finished)},
      {"wall_seconds", std::chrono::duration<double>(finished - started).count()},
  };
}

/// series.csv, summary.json, optional steps/diagnostics CSVs, then manifest.json.
void write_run_dir(const fs::path& dir, const Trace& trace, const SimSummary& summary,
                   json origin, Clock::time_point started) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file_atomic(dir / name, content);
    files.push_back(name);
  };
  emit("series.csv", render([&](std::ostream& os) { write_series_csv(os, trace); }));
  emit("summary.json", summary_json(summary, trace.config) + "\n");
  if (trace.config.full_log)
    emit("steps.csv", render([&](std::ostream& os) { write_steps_csv(os, trace); }));
  if (trace.config.diagnostics)
    emit("diagnostics.csv", render([&](std::ostream& os) { write_diagnostics_csv(os, trace); }));

  origin["seed"] = trace.seed;
  files.push_back("manifest.json");
  write_file_atomic(dir / "manifest.json",
                    manifest("run", origin, dir, files, started, Clock::now()).dump(2) + "\n");
}

std::string recovery_text(const std::vector<std::optional<std::int64_t>>& times) {
  std::vector<std::string> parts;
  for (const auto& t : times) parts.push_back(t ? std::to_string(*t) : "never");
  return "[" + fmt::format("{}", fmt::join(parts, ", ")) + "]";
}

std::uint64_t parse_u64(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw ConfigError("command line", 0, "--seeds",
                      "cannot parse '" + std::string(whole) + "' (use 1..k, a,b,c or a single seed)");
  return v;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_u64(text.substr(0, dots), text);
    const auto hi = parse_u64(text.substr(dots + 2), text);
    for (auto s = lo; s <= hi && hi >= lo; ++s) {
      seeds.push_back(s);
      if (s == hi) break;
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
      seeds.push_back(parse_u64(part, text));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  if (seeds.empty())
    throw ConfigError("command line", 0, "--seeds", "seed range '" + std::string(text) + "' is empty");
  return seeds;
}

unsigned default_jobs() {
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("COURNOT_MAX_JOBS")) {
    unsigned v = 0;
    const std::string_view s(cap);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) jobs = std::min(jobs, v);
  }
  return jobs;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  const auto started = Clock::now();
  Loaded loaded;
  try {
    loaded = load_source(options.source);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  auto& cfg = loaded.cfg;
  if (options.seed) cfg.master_seed = *options.seed;
  cfg.full_log = cfg.full_log || options.full_log;
  cfg.diagnostics = cfg.diagnostics || options.diagnostics;

  try {
    const Trace trace = run_simulation(cfg);
    const SimSummary summary = summarize(trace);
    write_run_dir(options.out_dir, trace, summary, loaded.origin, started);
    out << fmt::format("seed {}: band_occupancy={:.4f} final_collusive_regret={:.6g} "
                       "fairness_spread={:.4g} recovery={} ({:.2f}s) -> {}\n",
                       summary.seed, summary.band_occupancy, summary.final_collusive_regret,
                       summary.fairness_spread, recovery_text(summary.recovery_times),
                       trace.wall_seconds, options.out_dir.string());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_sweep(const SweepCmdOptions& options, std::ostream& out, std::ostream& err) {
  const auto started = Clock::now();
  Loaded loaded;
  std::vector<std::uint64_t> seeds;
  try {
    loaded = load_source(options.source);
    seeds = parse_seed_list(options.seeds);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    fs::create_directories(options.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  std::mutex io;
  SweepOptions sweep_opts;
  sweep_opts.jobs = options.jobs ? options.jobs : default_jobs();
  sweep_opts.keep_traces = false;
  sweep_opts.on_complete = [&](const SweepRun& run) {
    if (run.ok() && run.trace && run.summary) {
      write_run_dir(options.out_dir / fmt::format("seed_{}", run.seed), *run.trace, *run.summary,
                    loaded.origin, started);
      std::lock_guard lock(io);
      out << fmt::format("seed {}: band_occupancy={:.4f} final_collusive_regret={:.6g} recovery={}\n",
                         run.seed, run.summary->band_occupancy,
                         run.summary->final_collusive_regret,
                         recovery_text(run.summary->recovery_times));
    }
  };

  const SweepResult result = run_sweep(loaded.cfg, seeds, sweep_opts);
  for (const auto& run : result.runs)
    if (!run.ok()) err << fmt::format("seed {} failed: {}\n", run.seed, run.error);

  try {
    std::vector<std::string> files;
    for (const auto& run : result.runs)
      if (run.ok()) files.push_back(fmt::format("seed_{}", run.seed));
    write_file_atomic(options.out_dir / "aggregate.json", aggregate_json(result, loaded.cfg) + "\n");
    files.push_back("aggregate.json");
    files.push_back("manifest.json");
    auto origin = loaded.origin;
    origin["seeds"] = seeds;
    write_file_atomic(options.out_dir / "manifest.json",
                      manifest("sweep", origin, options.out_dir, files, started, Clock::now())
                              .dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  const auto& m = result.medians;
  if (m.succeeded > 0) {
    std::vector<std::string> rec;
    for (const auto& r : m.recovery_times) rec.push_back(r ? fmt::format("{:g}", *r) : "never");
    out << fmt::format("median over {} seeds: band_occupancy={:.4f} final_collusive_regret={:.6g} "
                       "recovery=[{}]\n",
                       m.succeeded, m.band_occupancy, m.final_collusive_regret,
                       fmt::join(rec, ", "));
  }
  return m.succeeded == 0 ? kExitRuntime : kExitOk;
}

int cmd_presets(std::ostream& out) {
  out << "Preset families. Append -stationary, -pattern1, -pattern2 or -pattern3 to pick the\n"
         "demand pattern; the bare family name runs stationary demand.\n\n";
  for (const auto& family : preset_families()) out << "  " << describe(family) << '\n';
  const AweParams awe;
  out << fmt::format(
      "\nAll presets: T=100000 steps, log window 100, seed 1, AWE agents with M={} "
      "eps in [{:g},{:g}] alpha in [{:g},{:g}].\n"
      "Pattern 3 uses gamma=0.01 and X ~ N(1, 0.2).\n",
      awe.memory, awe.eps_min, awe.eps_max, awe.alpha_min, awe.alpha_max);
  return kExitOk;
}

int cmd_demand(const DemandCmdOptions& options, std::ostream& out, std::ostream& err) {
  Loaded loaded;
  try {
    loaded = load_source(options.source);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (options.seed) loaded.cfg.master_seed = *options.seed;
  try {
    const auto schedule = build_schedule(loaded.cfg.demand_params());
    const auto csv = render([&](std::ostream& os) { write_demand_csv(os, schedule); });
    if (options.out) {
      if (options.out->has_parent_path()) fs::create_directories(options.out->parent_path());
      write_file_atomic(*options.out, csv);
    } else {
      out << csv;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace cournot::cli
