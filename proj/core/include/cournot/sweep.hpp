#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cournot/engine.hpp"
#include "cournot/metrics.hpp"

namespace cournot {

struct SweepRun {
  std::uint64_t seed = 0;
  std::optional<Trace> trace;  ///< dropped unless SweepOptions::keep_traces
  std::optional<SimSummary> summary;
  std::string error;           ///< non-empty when the run failed

  bool ok() const { return error.empty(); }
};

/// Cross-seed medians over the successful runs.
struct SweepMedians {
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  double band_occupancy = 0.0;
  double final_collusive_regret = 0.0;
  double fairness_spread = 0.0;
  double above_walras_profit_fraction = 0.0;
  /// One entry per breakpoint; nullopt when the median run never re-enters.
  std::vector<std::optional<double>> recovery_times;
};

struct SweepOptions {
  unsigned jobs = 1;
  bool keep_traces = true;
  /// Called on the worker thread right after a run finishes.
  std::function<void(const SweepRun&)> on_complete;
};

struct SweepResult {
  std::vector<SweepRun> runs;  ///< in seed-list order regardless of jobs
  SweepMedians medians;
};

double median(std::vector<double> values);
/// nullopt entries sort after every value.
std::optional<double> median(std::vector<std::optional<double>> values);

/// Independent runs of `tmpl` with master_seed replaced by each seed. A
/// failing seed is recorded in its SweepRun and does not stop the others.
/// Throws std::invalid_argument on an empty seed list.
SweepResult run_sweep(const SimConfig& tmpl, const std::vector<std::uint64_t>& seeds,
                      const SweepOptions& options = {});

}  // namespace cournot
