#pragma once

#include <iosfwd>
#include <string>

#include "cournot/demand.hpp"
#include "cournot/engine.hpp"
#include "cournot/metrics.hpp"
#include "cournot/sweep.hpp"

namespace cournot {

/// Reals in every CSV use 9 significant digits ("%.9g"); rows end in '\n'.
std::string format_real(double value);

/// Windowed series. Column order is fixed:
///   window_start,u_mean,joint_q,joint_profit,collusive_q,nash_q,walras_q,
///   collusive_profit,nash_profit,walras_profit,price,collusive_regret,window_len,
///   q_0..q_{n-1},profit_0..profit_{n-1},nash_q_0..nash_q_{n-1}
void write_series_csv(std::ostream& out, const Trace& trace);

/// One row per step (requires a full-log trace):
///   t,u,joint_q,joint_profit,price,collusive_q,nash_q,walras_q,collusive_profit,
///   q_0..q_{n-1},profit_0..profit_{n-1}
void write_steps_csv(std::ostream& out, const Trace& trace);

/// Windowed policy internals of agent 0: window_start,epsilon,alpha,sigma
void write_diagnostics_csv(std::ostream& out, const Trace& trace);

/// t,u
void write_demand_csv(std::ostream& out, const DemandSchedule& schedule);

std::string config_json(const SimConfig& cfg, int indent = 2);
std::string summary_json(const SimSummary& summary, const SimConfig& cfg, int indent = 2);
std::string aggregate_json(const SweepResult& result, const SimConfig& tmpl, int indent = 2);

}  // namespace cournot
