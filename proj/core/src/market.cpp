#include "cournot/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cournot {

void MarketConfig::validate() const {
  if (firms < 1) throw std::invalid_argument("market.firms must be >= 1");
  if (arms < 2) throw std::invalid_argument("market.arms must be >= 2");
  if (!(slope > 0.0)) throw std::invalid_argument("market.v must be > 0");
  if (!(base_demand > 0.0)) throw std::invalid_argument("market.u_s must be > 0");
  if (costs.size() != static_cast<std::size_t>(firms))
    throw std::invalid_argument("market.costs must have one entry per firm");
  for (double c : costs)
    if (!(c >= 0.0)) throw std::invalid_argument("market.costs must be non-negative");
}

bool MarketConfig::symmetric() const {
  return std::all_of(costs.begin(), costs.end(), [&](double c) { return c == costs.front(); });
}

double MarketConfig::min_cost() const { return *std::min_element(costs.begin(), costs.end()); }

double price_for_total(double total_quantity, double demand, double slope) {
  return std::max(demand - slope * total_quantity, 0.0);
}

double price(std::span<const Quantity> quantities, double demand, double slope) {
  if (quantities.empty()) throw std::invalid_argument("price: empty quantity profile");
  const Quantity total = std::accumulate(quantities.begin(), quantities.end(), Quantity{0});
  return price_for_total(static_cast<double>(total), demand, slope);
}

namespace {

// Joint profit of a cartel of identical cost-c producers supplying total q.
double joint_profit_at(double q, double demand, double slope, double cost) {
  return (price_for_total(q, demand, slope) - cost) * q;
}

}  // namespace

EquilibriumRefs equilibrium_refs(double demand, const MarketConfig& cfg) {
  if (!cfg.symmetric())
    throw UnsupportedConfiguration("equilibrium_refs: closed forms require symmetric costs");
  const double c = cfg.costs.front();
  const double v = cfg.slope;
  const double n = cfg.firms;

  EquilibriumRefs refs;
  refs.per_firm_nash_q.assign(cfg.firms, 0.0);
  if (demand <= c) return refs;

  const double surplus = demand - c;
  refs.collusive_joint_q = surplus / (2.0 * v);
  refs.nash_joint_q = surplus * n / (v * (n + 1.0));
  refs.walrasian_joint_q = surplus / v;
  refs.collusive_joint_profit = joint_profit_at(refs.collusive_joint_q, demand, v, c);
  refs.nash_joint_profit = joint_profit_at(refs.nash_joint_q, demand, v, c);
  refs.walrasian_joint_profit = joint_profit_at(refs.walrasian_joint_q, demand, v, c);
  std::fill(refs.per_firm_nash_q.begin(), refs.per_firm_nash_q.end(), refs.nash_joint_q / n);
  return refs;
}

std::vector<double> asymmetric_nash(double demand, const MarketConfig& cfg) {
  const auto n = static_cast<double>(cfg.firms);
  std::vector<double> q(cfg.costs.size(), 0.0);
  if (demand <= cfg.min_cost()) return q;

  const double cost_sum = std::accumulate(cfg.costs.begin(), cfg.costs.end(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = (demand - (n + 1.0) * cfg.costs[i] + cost_sum) / (cfg.slope * (n + 1.0));
    if (q[i] < 0.0)
      throw UnsupportedConfiguration("asymmetric_nash: firm " + std::to_string(i) +
                                     " is at a corner; interior solution is negative");
  }
  return q;
}

Quantity discrete_best_response(double demand, double slope, double cost, Quantity others_total,
                                Quantity min_q, Quantity max_q) {
  Quantity best = min_q;
  double best_profit = -std::numeric_limits<double>::infinity();
  for (Quantity q = min_q; q <= max_q; ++q) {
    const double p = price_for_total(static_cast<double>(q + others_total), demand, slope);
    const double pi = profit(q, p, cost);
    if (pi > best_profit) {
      best_profit = pi;
      best = q;
    }
  }
  return best;
}

BestResponseResult nash_via_best_response(double demand, const MarketConfig& cfg, int max_iters) {
  if (max_iters < 1) throw std::invalid_argument("nash_via_best_response: max_iters must be >= 1");
  BestResponseResult result;
  result.profile.assign(cfg.firms, 0);
  Quantity total = 0;

  for (int iter = 1; iter <= max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < cfg.firms; ++i) {
      const Quantity others = total - result.profile[i];
      const Quantity br =
          discrete_best_response(demand, cfg.slope, cfg.costs[i], others, 0, cfg.max_quantity());
      if (br != result.profile[i]) {
        total += br - result.profile[i];
        result.profile[i] = br;
        changed = true;
      }
    }
    result.iterations = iter;
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  return result;
}

EquilibriumRefs reference_bands(double demand, const MarketConfig& cfg) {
  if (cfg.symmetric()) return equilibrium_refs(demand, cfg);

  EquilibriumRefs refs;
  refs.per_firm_nash_q.assign(cfg.firms, 0.0);
  const double c_min = cfg.min_cost();
  if (demand <= c_min) return refs;

  const double v = cfg.slope;
  refs.collusive_joint_q = (demand - c_min) / (2.0 * v);
  refs.walrasian_joint_q = (demand - c_min) / v;
  refs.collusive_joint_profit = joint_profit_at(refs.collusive_joint_q, demand, v, c_min);
  refs.walrasian_joint_profit = joint_profit_at(refs.walrasian_joint_q, demand, v, c_min);

  try {
    refs.per_firm_nash_q = asymmetric_nash(demand, cfg);
  } catch (const UnsupportedConfiguration&) {
    const auto oracle = nash_via_best_response(demand, cfg, 1000);
    refs.per_firm_nash_q.assign(oracle.profile.begin(), oracle.profile.end());
  }
  refs.nash_joint_q =
      std::accumulate(refs.per_firm_nash_q.begin(), refs.per_firm_nash_q.end(), 0.0);
  const double p = price_for_total(refs.nash_joint_q, demand, v);
  for (int i = 0; i < cfg.firms; ++i)
    refs.nash_joint_profit += (p - cfg.costs[i]) * refs.per_firm_nash_q[i];
  return refs;
}

}  // namespace cournot
