#include "cournot/report.hpp"

#include <fmt/format.h>

#include <json.hpp>
#include <ostream>

namespace cournot {

using nlohmann::json;

std::string format_real(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{:.9g}", value);
}

namespace {

void indexed_header(std::ostream& out, const char* prefix, int n) {
  for (int i = 0; i < n; ++i) out << ',' << prefix << i;
}

json policy_json(const PolicySpec& spec) {
  struct Visitor {
    json operator()(const AweParams& p) const {
      return {{"kind", "awe"},          {"memory", p.memory},
              {"eps_min", p.eps_min},   {"eps_max", p.eps_max},
              {"alpha_min", p.alpha_min}, {"alpha_max", p.alpha_max},
              {"sigma_floor", p.sigma_floor}, {"sigma_cap", p.sigma_cap},
              {"mu_floor", p.mu_floor}};
    }
    json operator()(const VanillaParams& p) const {
      return {{"kind", "vanilla"}, {"epsilon", p.epsilon}, {"alpha", p.alpha}};
    }
    json operator()(const AdaptiveParams& p) const {
      return {{"kind", "adaptive"}, {"memory", p.memory}, {"eps_min", p.eps_min},
              {"eps_max", p.eps_max}, {"alpha", p.alpha},  {"mu_floor", p.mu_floor}};
    }
  };
  return std::visit(Visitor{}, spec);
}

json config_object(const SimConfig& cfg) {
  json policies = json::array();
  for (const auto& p : cfg.policies) policies.push_back(policy_json(p));
  return {
      {"market",
       {{"firms", cfg.market.firms},
        {"costs", cfg.market.costs},
        {"v", cfg.market.slope},
        {"u_s", cfg.market.base_demand},
        {"arms", cfg.market.arms}}},
      {"demand",
       {{"pattern", std::string(to_string(cfg.pattern))},
        {"gamma", cfg.gamma},
        {"shock_mu", cfg.shock_mu},
        {"shock_sigma", cfg.shock_sigma}}},
      {"simulation",
       {{"steps", cfg.steps}, {"seed", cfg.master_seed}, {"log_window", cfg.log_window},
        {"q_init_scale", cfg.q_init_scale}}},
      {"policies", policies},
  };
}

json recovery_json(const std::optional<std::int64_t>& r) {
  return r ? json(*r) : json("never");
}

}  // namespace

void write_series_csv(std::ostream& out, const Trace& trace) {
  const int n = trace.config.market.firms;
  out << "window_start,u_mean,joint_q,joint_profit,collusive_q,nash_q,walras_q,"
         "collusive_profit,nash_profit,walras_profit,price,collusive_regret,window_len";
  indexed_header(out, "q_", n);
  indexed_header(out, "profit_", n);
  indexed_header(out, "nash_q_", n);
  out << '\n';

  const auto regret = joint_cumulative_regret(std::span<const WindowRow>(trace.windows));
  for (std::size_t r = 0; r < trace.windows.size(); ++r) {
    const auto& w = trace.windows[r];
    out << w.start;
    for (double x : {w.demand, w.joint_q, w.joint_profit, w.collusive_q, w.nash_q, w.walras_q,
                     w.collusive_profit, w.nash_profit, w.walras_profit, w.price, regret[r]})
      out << ',' << format_real(x);
    out << ',' << w.length;
    for (const auto* v : {&w.firm_q, &w.firm_profit, &w.firm_nash_q})
      for (double x : *v) out << ',' << format_real(x);
    out << '\n';
  }
}

void write_steps_csv(std::ostream& out, const Trace& trace) {
  const int n = trace.config.market.firms;
  out << "t,u,joint_q,joint_profit,price,collusive_q,nash_q,walras_q,collusive_profit";
  indexed_header(out, "q_", n);
  indexed_header(out, "profit_", n);
  out << '\n';
  for (const auto& s : trace.steps) {
    out << s.t << ',' << format_real(s.demand) << ',' << s.joint_q;
    for (double x : {s.joint_profit, s.price, s.refs.collusive_joint_q, s.refs.nash_joint_q,
                     s.refs.walrasian_joint_q, s.refs.collusive_joint_profit})
      out << ',' << format_real(x);
    for (Quantity q : s.quantities) out << ',' << q;
    for (double p : s.profits) out << ',' << format_real(p);
    out << '\n';
  }
}

void write_diagnostics_csv(std::ostream& out, const Trace& trace) {
  out << "window_start,epsilon,alpha,sigma\n";
  for (const auto& d : trace.diagnostics)
    out << d.start << ',' << format_real(d.epsilon) << ',' << format_real(d.alpha) << ','
        << format_real(d.sigma) << '\n';
}

void write_demand_csv(std::ostream& out, const DemandSchedule& schedule) {
  out << "t,u\n";
  for (std::size_t t = 0; t < schedule.values.size(); ++t)
    out << t << ',' << format_real(schedule.values[t]) << '\n';
}

std::string config_json(const SimConfig& cfg, int indent) {
  return config_object(cfg).dump(indent);
}

std::string summary_json(const SimSummary& s, const SimConfig& cfg, int indent) {
  json recovery = json::array();
  for (const auto& r : s.recovery_times) recovery.push_back(recovery_json(r));
  json doc = {
      {"seed", s.seed},
      {"steps", s.steps},
      {"log_window", s.log_window},
      {"windows", s.windows},
      {"band_occupancy", s.band_occupancy},
      {"final_collusive_regret", s.final_collusive_regret},
      {"breakpoints", s.breakpoints},
      {"recovery_times", recovery},
      {"fairness_spread", s.fairness_spread},
      {"tail_firm_q", s.tail_firm_q},
      {"tail_firm_nash_q", s.tail_firm_nash_q},
      {"mean_joint_q", s.mean_joint_q},
      {"mean_joint_profit", s.mean_joint_profit},
      {"above_walras_profit_fraction", s.above_walras_profit_fraction},
      {"negative_profit_windows", s.negative_profit_windows},
      {"demand_change_events", s.demand_change_events},
      {"config", config_object(cfg)},
  };
  return doc.dump(indent);
}

std::string aggregate_json(const SweepResult& result, const SimConfig& tmpl, int indent) {
  json runs = json::array();
  for (const auto& r : result.runs) {
    json row = {{"seed", r.seed}, {"ok", r.ok()}};
    if (!r.ok()) row["error"] = r.error;
    if (r.summary) {
      json recovery = json::array();
      for (const auto& t : r.summary->recovery_times) recovery.push_back(recovery_json(t));
      row["band_occupancy"] = r.summary->band_occupancy;
      row["final_collusive_regret"] = r.summary->final_collusive_regret;
      row["fairness_spread"] = r.summary->fairness_spread;
      row["recovery_times"] = recovery;
    }
    runs.push_back(row);
  }
  const auto& m = result.medians;
  json med_recovery = json::array();
  for (const auto& r : m.recovery_times) med_recovery.push_back(r ? json(*r) : json("never"));
  json doc = {
      {"runs", runs},
      {"median",
       {{"band_occupancy", m.band_occupancy},
        {"final_collusive_regret", m.final_collusive_regret},
        {"fairness_spread", m.fairness_spread},
        {"above_walras_profit_fraction", m.above_walras_profit_fraction},
        {"recovery_times", med_recovery}}},
      {"succeeded", m.succeeded},
      {"failed", m.failed},
      {"config", config_object(tmpl)},
  };
  return doc.dump(indent);
}

}  // namespace cournot
