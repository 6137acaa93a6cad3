#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cournot/agents.hpp"
#include "cournot/demand.hpp"
#include "cournot/market.hpp"

namespace cournot {

struct SimConfig {
  MarketConfig market;
  DemandPattern pattern = DemandPattern::Stationary;
  double gamma = 0.01;
  double shock_mu = 1.0;
  double shock_sigma = 0.2;
  std::int64_t steps = 100000;
  std::vector<PolicySpec> policies;  ///< one per firm
  std::uint64_t master_seed = 1;
  std::int64_t log_window = 100;
  /// Initial Q-values are uniform in (0, scale). 0 selects each firm's
  /// monopoly-profit bound at baseline demand; 1 gives the plain (0,1) range.
  double q_init_scale = 0.0;
  bool full_log = false;     ///< keep every StepRecord in the trace
  bool diagnostics = false;  ///< keep windowed epsilon/alpha/sigma of agent 0

  void validate() const;
  DemandParams demand_params() const;
  /// Resolved initial-Q scale for firm i.
  double init_scale_for(int firm) const;
};

struct StepRecord {
  std::int64_t t = 0;
  double demand = 0.0;
  std::vector<Quantity> quantities;
  double price = 0.0;
  std::vector<double> profits;
  Quantity joint_q = 0;
  double joint_profit = 0.0;
  EquilibriumRefs refs;
};

/// Means over one logging window [start, start + length).
struct WindowRow {
  std::int64_t start = 0;
  std::int64_t length = 0;
  double demand = 0.0;
  double joint_q = 0.0;
  double joint_profit = 0.0;
  double price = 0.0;
  double collusive_q = 0.0;
  double nash_q = 0.0;
  double walras_q = 0.0;
  double collusive_profit = 0.0;
  double nash_profit = 0.0;
  double walras_profit = 0.0;
  std::vector<double> firm_q;
  std::vector<double> firm_profit;
  std::vector<double> firm_nash_q;
};

struct DiagnosticsRow {
  std::int64_t start = 0;
  double epsilon = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
};

struct Trace {
  SimConfig config;
  std::uint64_t seed = 0;
  std::vector<WindowRow> windows;   ///< always present, ceil(T / log_window) rows
  std::vector<StepRecord> steps;    ///< present when config.full_log
  std::vector<DiagnosticsRow> diagnostics;
  std::int64_t demand_change_events = 0;
  double wall_seconds = 0.0;
};

/// Plays the repeated game: every step all agents pick an arm, the market
/// clears once on the joint profile, and each agent gets its own profit as
/// reward. Bit-identical for identical configs.
Trace run_simulation(const SimConfig& cfg);

/// Same loop with caller-supplied policies (one per firm, each with
/// cfg.market.arms arms). Agent RNG streams are still derived from the seed.
Trace run_simulation(const SimConfig& cfg, std::vector<std::unique_ptr<Policy>> policies);

/// Fully explicit form: agent i selects with agent_rngs[i].
Trace run_simulation(const SimConfig& cfg, std::vector<std::unique_ptr<Policy>> policies,
                     std::vector<Rng> agent_rngs);

}  // namespace cournot
