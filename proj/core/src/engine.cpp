#include "cournot/engine.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

namespace cournot {

void SimConfig::validate() const {
  market.validate();
  if (steps < 1) throw std::invalid_argument("simulation.steps must be >= 1");
  if (log_window < 1) throw std::invalid_argument("simulation.log_window must be >= 1");
  if (policies.size() != static_cast<std::size_t>(market.firms))
    throw std::invalid_argument("need exactly one policy per firm (got " +
                                std::to_string(policies.size()) + " for " +
                                std::to_string(market.firms) + " firms)");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("demand.gamma must lie in [0, 1]");
  if (!(shock_sigma >= 0.0)) throw std::invalid_argument("demand.shock_sigma must be >= 0");
  if (q_init_scale < 0.0) throw std::invalid_argument("simulation.q_init_scale must be >= 0");
  for (const auto& p : policies) validate_policy_spec(p);
}

double SimConfig::init_scale_for(int firm) const {
  if (q_init_scale > 0.0) return q_init_scale;
  const double surplus = market.base_demand - market.costs[static_cast<std::size_t>(firm)];
  const double bound = surplus * surplus / (4.0 * market.slope);
  return surplus > 0.0 && bound > 0.0 ? bound : 1.0;
}

DemandParams SimConfig::demand_params() const {
  DemandParams d;
  d.pattern = pattern;
  d.steps = steps;
  d.base = market.base_demand;
  d.gamma = gamma;
  d.shock_mu = shock_mu;
  d.shock_sigma = shock_sigma;
  d.seed = derive_seed(master_seed, StreamTag::Demand);
  return d;
}

namespace {

class WindowAccumulator {
 public:
  explicit WindowAccumulator(int firms) { reset(0, firms); }

  void add(const StepRecord& s) {
    ++row_.length;
    row_.demand += s.demand;
    row_.joint_q += static_cast<double>(s.joint_q);
    row_.joint_profit += s.joint_profit;
    row_.price += s.price;
    row_.collusive_q += s.refs.collusive_joint_q;
    row_.nash_q += s.refs.nash_joint_q;
    row_.walras_q += s.refs.walrasian_joint_q;
    row_.collusive_profit += s.refs.collusive_joint_profit;
    row_.nash_profit += s.refs.nash_joint_profit;
    row_.walras_profit += s.refs.walrasian_joint_profit;
    for (std::size_t i = 0; i < s.quantities.size(); ++i) {
      row_.firm_q[i] += static_cast<double>(s.quantities[i]);
      row_.firm_profit[i] += s.profits[i];
      row_.firm_nash_q[i] += s.refs.per_firm_nash_q[i];
    }
  }

  void add_diag(const PolicyDiagnostics& d) {
    diag_.epsilon += d.epsilon;
    diag_.alpha += d.alpha;
    diag_.sigma += d.sigma;
  }

  std::int64_t length() const { return row_.length; }

  WindowRow take_row() {
    const double n = static_cast<double>(row_.length);
    for (double* x : {&row_.demand, &row_.joint_q, &row_.joint_profit, &row_.price,
                      &row_.collusive_q, &row_.nash_q, &row_.walras_q, &row_.collusive_profit,
                      &row_.nash_profit, &row_.walras_profit})
      *x /= n;
    for (auto* v : {&row_.firm_q, &row_.firm_profit, &row_.firm_nash_q})
      for (double& x : *v) x /= n;
    return row_;
  }

  DiagnosticsRow take_diag() {
    const double n = static_cast<double>(row_.length);
    return {row_.start, diag_.epsilon / n, diag_.alpha / n, diag_.sigma / n};
  }

  void reset(std::int64_t start, int firms) {
    row_ = WindowRow{};
    row_.start = start;
    row_.firm_q.assign(firms, 0.0);
    row_.firm_profit.assign(firms, 0.0);
    row_.firm_nash_q.assign(firms, 0.0);
    diag_ = DiagnosticsRow{};
  }

 private:
  WindowRow row_;
  DiagnosticsRow diag_;
};

}  // namespace

Trace run_simulation(const SimConfig& cfg) {
  cfg.validate();
  std::vector<std::unique_ptr<Policy>> policies;
  policies.reserve(cfg.policies.size());
  for (std::size_t i = 0; i < cfg.policies.size(); ++i) {
    // Q initialisation draws come from the agent's own stream.
    Rng init = make_stream(cfg.master_seed, StreamTag::Agent, 2 * i + 1);
    policies.push_back(make_policy(cfg.policies[i], static_cast<std::size_t>(cfg.market.arms), init,
                                   cfg.init_scale_for(static_cast<int>(i))));
  }
  return run_simulation(cfg, std::move(policies));
}

Trace run_simulation(const SimConfig& cfg, std::vector<std::unique_ptr<Policy>> policies) {
  std::vector<Rng> agent_rngs;
  agent_rngs.reserve(policies.size());
  for (std::size_t i = 0; i < policies.size(); ++i)
    agent_rngs.push_back(make_stream(cfg.master_seed, StreamTag::Agent, 2 * i));
  return run_simulation(cfg, std::move(policies), std::move(agent_rngs));
}

Trace run_simulation(const SimConfig& cfg, std::vector<std::unique_ptr<Policy>> policies,
                     std::vector<Rng> agent_rngs) {
  cfg.market.validate();
  if (cfg.steps < 1) throw std::invalid_argument("simulation.steps must be >= 1");
  if (cfg.log_window < 1) throw std::invalid_argument("simulation.log_window must be >= 1");
  const int n = cfg.market.firms;
  if (policies.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("need exactly one policy per firm");
  if (agent_rngs.size() != policies.size())
    throw std::invalid_argument("need exactly one RNG stream per agent");
  for (const auto& p : policies)
    if (!p || p->arms() != static_cast<std::size_t>(cfg.market.arms))
      throw std::invalid_argument("policy arm count must equal market.arms");

  const auto started = std::chrono::steady_clock::now();
  const DemandSchedule schedule = build_schedule(cfg.demand_params());

  Trace trace;
  trace.config = cfg;
  trace.seed = cfg.master_seed;
  trace.demand_change_events = schedule.change_events;
  trace.windows.reserve(static_cast<std::size_t>((cfg.steps + cfg.log_window - 1) / cfg.log_window));
  if (cfg.full_log) trace.steps.reserve(static_cast<std::size_t>(cfg.steps));

  StepRecord step;
  step.quantities.assign(n, 0);
  step.profits.assign(n, 0.0);
  std::vector<std::size_t> arms(n, 0);
  double cached_demand = -1.0;
  WindowAccumulator window(n);

  for (std::int64_t t = 0; t < cfg.steps; ++t) {
    step.t = t;
    step.demand = schedule.values[static_cast<std::size_t>(t)];
    if (step.demand != cached_demand) {
      step.refs = reference_bands(step.demand, cfg.market);
      cached_demand = step.demand;
    }

    // All selections happen before any update.
    for (int i = 0; i < n; ++i) {
      arms[i] = policies[i]->select(agent_rngs[i]);
      step.quantities[i] = static_cast<Quantity>(arms[i]);
    }
    step.joint_q = 0;
    for (Quantity q : step.quantities) step.joint_q += q;
    step.price = price_for_total(static_cast<double>(step.joint_q), step.demand, cfg.market.slope);

    step.joint_profit = 0.0;
    for (int i = 0; i < n; ++i) {
      step.profits[i] = profit(step.quantities[i], step.price, cfg.market.costs[i]);
      step.joint_profit += step.profits[i];
    }
    for (int i = 0; i < n; ++i) policies[i]->update(arms[i], step.profits[i]);

    window.add(step);
    if (cfg.diagnostics) window.add_diag(policies.front()->diagnostics());
    if (cfg.full_log) trace.steps.push_back(step);

    if (window.length() == cfg.log_window || t + 1 == cfg.steps) {
      trace.windows.push_back(window.take_row());
      if (cfg.diagnostics) trace.diagnostics.push_back(window.take_diag());
      window.reset(t + 1, n);
    }
  }

  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return trace;
}

}  // namespace cournot
