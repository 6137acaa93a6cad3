#include "cournot/demand.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cournot {

std::optional<DemandPattern> parse_pattern(std::string_view name) {
  if (name == "stationary") return DemandPattern::Stationary;
  if (name == "pattern1") return DemandPattern::Pattern1;
  if (name == "pattern2") return DemandPattern::Pattern2;
  if (name == "pattern3") return DemandPattern::Pattern3;
  return std::nullopt;
}

std::string_view to_string(DemandPattern pattern) {
  switch (pattern) {
    case DemandPattern::Stationary: return "stationary";
    case DemandPattern::Pattern1: return "pattern1";
    case DemandPattern::Pattern2: return "pattern2";
    case DemandPattern::Pattern3: return "pattern3";
  }
  return "unknown";
}

double pattern1_u(std::int64_t t, std::int64_t horizon, double base) {
  if (t < horizon / 3) return base;
  if (t < horizon / 2) return base / 2.0;
  if (t < 3 * horizon / 4) return base;
  return base / 2.0;
}

std::vector<std::int64_t> pattern1_breakpoints(std::int64_t horizon) {
  return {horizon / 3, horizon / 2, 3 * horizon / 4};
}

double pattern2_u(std::int64_t t, std::int64_t horizon, double base) {
  const std::int64_t half = horizon / 2;
  if (half < 1) return base;
  // The pdf normalisation cancels in the ratio f(t)/f(mean).
  const double z = static_cast<double>(t - half) / static_cast<double>(half);
  return base * std::exp(-0.5 * z * z);
}

Pattern3Step pattern3_next(double previous, Rng& rng, double gamma, double shock_mu,
                           double shock_sigma) {
  const double z = uniform01(rng);
  if (z < gamma) {
    const double x = shock_mu + shock_sigma * std::normal_distribution<double>{0.0, 1.0}(rng);
    return {previous * std::abs(x), true};
  }
  return {previous, false};
}

DemandSchedule build_schedule(const DemandParams& params) {
  if (params.steps < 1) throw std::invalid_argument("demand: steps must be >= 1");
  if (!(params.base > 0.0)) throw std::invalid_argument("demand: u_s must be > 0");
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0))
    throw std::invalid_argument("demand: gamma must lie in [0, 1]");

  DemandSchedule schedule;
  schedule.params = params;
  const auto horizon = params.steps;
  auto& values = schedule.values;
  values.resize(static_cast<std::size_t>(horizon));

  switch (params.pattern) {
    case DemandPattern::Stationary:
      std::fill(values.begin(), values.end(), params.base);
      break;
    case DemandPattern::Pattern1:
      for (std::int64_t t = 0; t < horizon; ++t) values[t] = pattern1_u(t, horizon, params.base);
      break;
    case DemandPattern::Pattern2:
      for (std::int64_t t = 0; t < horizon; ++t) values[t] = pattern2_u(t, horizon, params.base);
      break;
    case DemandPattern::Pattern3: {
      Rng rng{params.seed};
      values[0] = params.base;
      for (std::int64_t t = 1; t < horizon; ++t) {
        const auto step =
            pattern3_next(values[t - 1], rng, params.gamma, params.shock_mu, params.shock_sigma);
        values[t] = step.value;
        schedule.change_events += step.changed ? 1 : 0;
      }
      break;
    }
    default:
      throw std::invalid_argument("demand: unknown pattern " +
                                  std::to_string(static_cast<int>(params.pattern)));
  }
  return schedule;
}

}  // namespace cournot
