#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cournot {

/// Production quantity. Arm k of a firm's action space plays quantity k.
using Quantity = std::int64_t;

/// Raised when a closed form does not apply to the given market, e.g. the
/// symmetric equilibrium formulas on firms with different costs, or an
/// asymmetric Nash equilibrium with a firm at the zero-output corner.
class UnsupportedConfiguration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MarketConfig {
  int firms = 2;
  std::vector<double> costs{4.0, 4.0};  ///< marginal cost per firm
  double slope = 1.0;                   ///< v in p = max(u - v Q, 0)
  double base_demand = 40.0;            ///< u_s, the demand intercept at t = 0
  int arms = 41;                        ///< K; quantities 0..K-1

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
  bool symmetric() const;
  double min_cost() const;
  Quantity max_quantity() const { return arms - 1; }
};

/// Joint-output references for the current demand intercept.
struct EquilibriumRefs {
  double collusive_joint_q = 0.0;
  double nash_joint_q = 0.0;
  double walrasian_joint_q = 0.0;
  double collusive_joint_profit = 0.0;
  double nash_joint_profit = 0.0;
  double walrasian_joint_profit = 0.0;
  std::vector<double> per_firm_nash_q;
};

double price_for_total(double total_quantity, double demand, double slope);

/// Inverse demand max(u - v * sum(q), 0). Throws on an empty profile.
double price(std::span<const Quantity> quantities, double demand, double slope);

inline double profit(Quantity q, double p, double cost) {
  return p * static_cast<double>(q) - cost * static_cast<double>(q);
}

/// Collusive, Nash and Walrasian joint outputs for symmetric firms.
/// All references are zero when demand <= cost.
/// Throws UnsupportedConfiguration on asymmetric costs.
EquilibriumRefs equilibrium_refs(double demand, const MarketConfig& cfg);

/// Interior Cournot-Nash quantities for arbitrary linear costs,
///   q_i = (u - (n+1) c_i + sum_j c_j) / (v (n+1)).
/// Returns zeros when demand <= every cost; throws UnsupportedConfiguration
/// when some firm's interior quantity is negative.
std::vector<double> asymmetric_nash(double demand, const MarketConfig& cfg);

/// Exhaustive best response over [min_q, max_q]; ties go to the smaller quantity.
Quantity discrete_best_response(double demand, double slope, double cost, Quantity others_total,
                                Quantity min_q, Quantity max_q);

struct BestResponseResult {
  std::vector<Quantity> profile;
  bool converged = false;
  int iterations = 0;
};

/// Round-robin best-response dynamics on the arm grid, starting from the
/// zero profile. A non-converged result carries the last profile.
BestResponseResult nash_via_best_response(double demand, const MarketConfig& cfg, int max_iters);

/// References usable for any cost vector. Symmetric markets get
/// equilibrium_refs. Otherwise the collusive and Walrasian outputs are those
/// of the cheapest producer and the Nash profile comes from asymmetric_nash,
/// falling back to the best-response oracle at corner equilibria.
EquilibriumRefs reference_bands(double demand, const MarketConfig& cfg);

}  // namespace cournot
