#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cournot/engine.hpp"

namespace cournot {

/// Non-overlapping window means; the trailing partial window is averaged
/// over its actual length.
std::vector<double> rolling_average(std::span<const double> series, std::int64_t window);

/// Cumulative sum of (collusive joint profit - realised joint profit), per step.
/// This is regret against the cartel outcome, reported as `collusive_regret`.
std::vector<double> joint_cumulative_regret(std::span<const StepRecord> steps);

/// Same quantity evaluated at the end of each logging window.
std::vector<double> joint_cumulative_regret(std::span<const WindowRow> windows);

/// Fraction of windows with lower <= joint_q <= upper.
double band_occupancy(std::span<const double> joint_q, std::span<const double> lower,
                      std::span<const double> upper);
/// Band is [collusive_q, walras_q], both averaged over the window.
double band_occupancy(std::span<const WindowRow> windows);

/// For each breakpoint, steps from the first window starting at or after it
/// until the first window inside the band. nullopt means it never re-enters.
std::vector<std::optional<std::int64_t>> recovery_time(std::span<const double> joint_q,
                                                       std::span<const double> lower,
                                                       std::span<const double> upper,
                                                       std::span<const std::int64_t> window_starts,
                                                       std::span<const std::int64_t> breakpoints);
std::vector<std::optional<std::int64_t>> recovery_time(std::span<const WindowRow> windows,
                                                       std::span<const std::int64_t> breakpoints);

/// max - min of per-firm mean quantities. Throws on an empty input.
double fairness_spread(std::span<const double> firm_means);

struct TailMeans {
  std::vector<double> firm_q;
  std::vector<double> firm_nash_q;
  std::int64_t steps = 0;
};

/// Per-firm means over the trailing windows covering at least
/// ceil(fraction * total steps) steps.
TailMeans tail_means(std::span<const WindowRow> windows, double fraction);

struct SimSummary {
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  std::int64_t log_window = 0;
  std::size_t windows = 0;
  double band_occupancy = 0.0;
  std::vector<double> collusive_regret;  ///< cumulative, one value per window
  double final_collusive_regret = 0.0;
  std::vector<std::int64_t> breakpoints;
  std::vector<std::optional<std::int64_t>> recovery_times;
  double fairness_spread = 0.0;
  std::vector<double> tail_firm_q;
  std::vector<double> tail_firm_nash_q;
  double mean_joint_q = 0.0;
  double mean_joint_profit = 0.0;
  /// Windows whose mean joint profit exceeds the windowed Walrasian joint profit.
  double above_walras_profit_fraction = 0.0;
  std::size_t negative_profit_windows = 0;
  std::int64_t demand_change_events = 0;
};

inline constexpr double kFairnessTailFraction = 0.1;

SimSummary summarize(const Trace& trace);

}  // namespace cournot
