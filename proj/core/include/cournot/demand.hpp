#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cournot/rng.hpp"

namespace cournot {

/// Demand-intercept trajectories.
///   Pattern1   - sudden recurring shocks: u_s, u_s/2 from T/3, u_s from T/2, u_s/2 from 3T/4
///   Pattern2   - smooth bump shaped like a normal pdf centred at T/2
///   Pattern3   - erratic multiplicative shocks u_t = u_{t-1} |X| with probability gamma
///   Stationary - u_t = u_s
enum class DemandPattern { Stationary, Pattern1, Pattern2, Pattern3 };

std::optional<DemandPattern> parse_pattern(std::string_view name);
std::string_view to_string(DemandPattern pattern);

struct DemandParams {
  DemandPattern pattern = DemandPattern::Stationary;
  std::int64_t steps = 100000;
  double base = 40.0;
  double gamma = 0.01;       ///< Pattern3 change probability per step
  double shock_mu = 1.0;     ///< Pattern3 multiplier mean
  double shock_sigma = 0.2;  ///< Pattern3 multiplier standard deviation
  std::uint64_t seed = 0;    ///< seed of the demand stream
};

struct DemandSchedule {
  DemandParams params;
  std::vector<double> values;
  std::int64_t change_events = 0;  ///< Pattern3 only: number of steps with z_t < gamma

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t t) const { return values[t]; }
};

/// Breakpoints use integer floor division and apply from the breakpoint on.
double pattern1_u(std::int64_t t, std::int64_t horizon, double base);

/// base * f(t | h, h) / f(h | h, h) with h = floor(T/2) as both mean and std.
double pattern2_u(std::int64_t t, std::int64_t horizon, double base);

/// Step breakpoints of Pattern1 for a horizon: {T/3, T/2, 3T/4}.
std::vector<std::int64_t> pattern1_breakpoints(std::int64_t horizon);

struct Pattern3Step {
  double value;
  bool changed;
};

/// One Pattern3 transition. Always draws z_t; draws X only when z_t < gamma.
Pattern3Step pattern3_next(double previous, Rng& rng, double gamma, double shock_mu = 1.0,
                           double shock_sigma = 0.2);

/// Materializes the full series. Pure in (pattern, steps, base, gamma, shock params, seed).
DemandSchedule build_schedule(const DemandParams& params);

}  // namespace cournot
