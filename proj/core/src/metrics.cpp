#include "cournot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cournot {

std::vector<double> rolling_average(std::span<const double> series, std::int64_t window) {
  if (window < 1) throw std::invalid_argument("rolling_average: window must be >= 1");
  std::vector<double> out;
  const auto w = static_cast<std::size_t>(window);
  out.reserve((series.size() + w - 1) / w);
  for (std::size_t start = 0; start < series.size(); start += w) {
    const std::size_t end = std::min(series.size(), start + w);
    double sum = 0.0;
    for (std::size_t i = start; i < end; ++i) sum += series[i];
    out.push_back(sum / static_cast<double>(end - start));
  }
  return out;
}

std::vector<double> joint_cumulative_regret(std::span<const StepRecord> steps) {
  std::vector<double> out;
  out.reserve(steps.size());
  double acc = 0.0;
  for (const auto& s : steps) {
    acc += s.refs.collusive_joint_profit - s.joint_profit;
    out.push_back(acc);
  }
  return out;
}

std::vector<double> joint_cumulative_regret(std::span<const WindowRow> windows) {
  std::vector<double> out;
  out.reserve(windows.size());
  double acc = 0.0;
  for (const auto& w : windows) {
    acc += (w.collusive_profit - w.joint_profit) * static_cast<double>(w.length);
    out.push_back(acc);
  }
  return out;
}

namespace {

bool in_band(double q, double lo, double hi) { return lo <= q && q <= hi; }

struct BandSeries {
  std::vector<double> q, lo, hi;
  std::vector<std::int64_t> starts;
};

BandSeries band_series(std::span<const WindowRow> windows) {
  BandSeries b;
  for (const auto& w : windows) {
    b.q.push_back(w.joint_q);
    b.lo.push_back(w.collusive_q);
    b.hi.push_back(w.walras_q);
    b.starts.push_back(w.start);
  }
  return b;
}

}  // namespace

double band_occupancy(std::span<const double> joint_q, std::span<const double> lower,
                      std::span<const double> upper) {
  if (joint_q.size() != lower.size() || joint_q.size() != upper.size())
    throw std::invalid_argument("band_occupancy: series lengths differ");
  if (joint_q.empty()) return 0.0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < joint_q.size(); ++i)
    inside += in_band(joint_q[i], lower[i], upper[i]) ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(joint_q.size());
}

double band_occupancy(std::span<const WindowRow> windows) {
  const auto b = band_series(windows);
  return band_occupancy(b.q, b.lo, b.hi);
}

std::vector<std::optional<std::int64_t>> recovery_time(std::span<const double> joint_q,
                                                       std::span<const double> lower,
                                                       std::span<const double> upper,
                                                       std::span<const std::int64_t> window_starts,
                                                       std::span<const std::int64_t> breakpoints) {
  if (joint_q.size() != lower.size() || joint_q.size() != upper.size() ||
      joint_q.size() != window_starts.size())
    throw std::invalid_argument("recovery_time: series lengths differ");

  std::vector<std::optional<std::int64_t>> out;
  for (std::int64_t bp : breakpoints) {
    const auto first = std::lower_bound(window_starts.begin(), window_starts.end(), bp);
    std::optional<std::int64_t> found;
    for (auto it = first; it != window_starts.end(); ++it) {
      const auto i = static_cast<std::size_t>(it - window_starts.begin());
      if (in_band(joint_q[i], lower[i], upper[i])) {
        found = *it - *first;
        break;
      }
    }
    out.push_back(found);
  }
  return out;
}

std::vector<std::optional<std::int64_t>> recovery_time(std::span<const WindowRow> windows,
                                                       std::span<const std::int64_t> breakpoints) {
  const auto b = band_series(windows);
  return recovery_time(b.q, b.lo, b.hi, b.starts, breakpoints);
}

double fairness_spread(std::span<const double> firm_means) {
  if (firm_means.empty()) throw std::invalid_argument("fairness_spread: no firms");
  const auto [lo, hi] = std::minmax_element(firm_means.begin(), firm_means.end());
  return *hi - *lo;
}

TailMeans tail_means(std::span<const WindowRow> windows, double fraction) {
  TailMeans out;
  if (windows.empty()) return out;
  std::int64_t total = 0;
  for (const auto& w : windows) total += w.length;
  const auto wanted = static_cast<std::int64_t>(std::ceil(fraction * static_cast<double>(total)));

  const std::size_t firms = windows.front().firm_q.size();
  out.firm_q.assign(firms, 0.0);
  out.firm_nash_q.assign(firms, 0.0);
  for (auto it = windows.rbegin(); it != windows.rend() && out.steps < std::max<std::int64_t>(wanted, 1); ++it) {
    const auto len = static_cast<double>(it->length);
    for (std::size_t i = 0; i < firms; ++i) {
      out.firm_q[i] += it->firm_q[i] * len;
      out.firm_nash_q[i] += it->firm_nash_q[i] * len;
    }
    out.steps += it->length;
  }
  for (std::size_t i = 0; i < firms; ++i) {
    out.firm_q[i] /= static_cast<double>(out.steps);
    out.firm_nash_q[i] /= static_cast<double>(out.steps);
  }
  return out;
}

SimSummary summarize(const Trace& trace) {
  SimSummary s;
  const auto& cfg = trace.config;
  const std::span<const WindowRow> windows = trace.windows;
  s.seed = trace.seed;
  s.steps = cfg.steps;
  s.log_window = cfg.log_window;
  s.windows = windows.size();
  s.demand_change_events = trace.demand_change_events;

  s.band_occupancy = band_occupancy(windows);
  s.collusive_regret = joint_cumulative_regret(windows);
  s.final_collusive_regret = s.collusive_regret.empty() ? 0.0 : s.collusive_regret.back();

  if (cfg.pattern == DemandPattern::Pattern1) {
    s.breakpoints = pattern1_breakpoints(cfg.steps);
    s.recovery_times = recovery_time(windows, s.breakpoints);
  }

  const auto tail = tail_means(windows, kFairnessTailFraction);
  s.tail_firm_q = tail.firm_q;
  s.tail_firm_nash_q = tail.firm_nash_q;
  s.fairness_spread = tail.firm_q.empty() ? 0.0 : fairness_spread(tail.firm_q);

  double q_sum = 0.0, p_sum = 0.0;
  std::size_t above = 0;
  for (const auto& w : windows) {
    q_sum += w.joint_q * static_cast<double>(w.length);
    p_sum += w.joint_profit * static_cast<double>(w.length);
    above += w.joint_profit > w.walras_profit ? 1 : 0;
    s.negative_profit_windows += w.joint_profit < 0.0 ? 1 : 0;
  }
  if (!windows.empty()) {
    s.mean_joint_q = q_sum / static_cast<double>(cfg.steps);
    s.mean_joint_profit = p_sum / static_cast<double>(cfg.steps);
    s.above_walras_profit_fraction =
        static_cast<double>(above) / static_cast<double>(windows.size());
  }
  return s;
}

}  // namespace cournot
