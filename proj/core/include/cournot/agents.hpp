#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "cournot/rng.hpp"

namespace cournot {

/// Fixed-capacity FIFO of the most recent Q-value snapshots of one arm.
class QHistory {
 public:
  explicit QHistory(std::size_t capacity = 10);

  void push(double value);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return buffer_.size(); }
  bool empty() const { return size_ == 0; }
  /// i = 0 is the oldest retained entry.
  double operator[](std::size_t i) const;
  double mean() const;
  /// Bessel-corrected sample standard deviation; 0 with fewer than 2 entries.
  double sample_std() const;

 private:
  std::vector<double> buffer_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

/// Lowest index among the maxima.
std::size_t argmax_lowest(std::span<const double> values);

/// Index drawn from an unnormalised non-negative weight vector.
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

/// |(reward - mu_bar) / mu_bar|; returns `fallback` when |mu_bar| < mu_floor.
double quantify_change(double reward, double mu_bar, double fallback, double mu_floor = 1e-9);

/// Normal-pdf weights over arm indices centred at `center`, normalised to 1.
/// Falls back to uniform if every density underflows.
std::vector<double> normal_weights(std::size_t arms, std::size_t center, double sigma);

/// Weighted-exploration distribution after a greedy pull. The spread is the
/// sample std of the greedy arm's Q-history clamped to [sigma_floor, sigma_cap].
/// Returns nullopt while the history has fewer than 2 entries.
std::optional<std::vector<double>> recompute_weights(std::span<const double> q,
                                                     const QHistory& greedy_history,
                                                     double sigma_floor, double sigma_cap);

struct PolicyDiagnostics {
  double epsilon = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;  ///< spread of the exploration weights; 0 for uniform exploration
};

/// An independent learner. The market reaches a policy only through the
/// reward passed to update(); policies never see rivals or demand.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::size_t select(Rng& rng) = 0;
  virtual void update(std::size_t arm, double reward) = 0;

  virtual std::size_t arms() const = 0;
  virtual std::span<const double> q_values() const = 0;
  virtual PolicyDiagnostics diagnostics() const = 0;
  virtual std::string_view name() const = 0;
};

// ---------------------------------------------------------------------------
// Adaptive with Weighted Exploration epsilon-greedy

struct AweParams {
  int memory = 10;
  double eps_min = 0.05;
  double eps_max = 0.3;
  double alpha_min = 0.01;
  double alpha_max = 0.3;
  double sigma_floor = 2.0;
  /// Upper clamp of the weight spread in arm units; 0 means "use K".
  double sigma_cap = 0.0;
  double mu_floor = 1e-9;
};

struct ChangeStats {
  double mu_bar = 0.0;     ///< mean of the greedy arm's Q-history
  std::size_t mu_hat = 0;  ///< current argmax arm
  double sigma_hat = 0.0;  ///< clamped std of the greedy arm's Q-history
  double new_rate = 0.0;   ///< quantified change, before clamping into eps/alpha bounds
};

struct AwePolicyState {
  std::vector<double> q;
  std::vector<double> weights;
  double epsilon = 0.0;
  double alpha = 0.0;
  std::vector<QHistory> history;
  bool greedy_flag = false;
  std::optional<ChangeStats> last_change;
};

/// Q-values start at independent uniform draws in (0, init_scale); weights start
/// proportional to Q; epsilon and alpha start at their upper bounds and stay
/// there until the greedy arm has two history entries.
class AwePolicy final : public Policy {
 public:
  AwePolicy(std::size_t arms, const AweParams& params, Rng& init_rng, double init_scale = 1.0);
  AwePolicy(std::vector<double> initial_q, const AweParams& params);

  std::size_t select(Rng& rng) override;
  void update(std::size_t arm, double reward) override;

  std::size_t arms() const override { return state_.q.size(); }
  std::span<const double> q_values() const override { return state_.q; }
  PolicyDiagnostics diagnostics() const override;
  std::string_view name() const override { return "awe"; }

  const AwePolicyState& state() const { return state_; }
  const AweParams& params() const { return params_; }

  /// Test hooks for the degenerate cases of the selection rule.
  void set_weights(std::vector<double> weights);
  void set_epsilon(double epsilon) { state_.epsilon = epsilon; }

 private:
  AweParams params_;
  AwePolicyState state_;
  double sigma_cap_;
};

// ---------------------------------------------------------------------------
// Baselines

struct VanillaParams {
  double epsilon = 0.1;
  double alpha = 0.1;
};

/// Constant-epsilon greedy with uniform exploration and exponential Q update.
class VanillaEpsGreedy final : public Policy {
 public:
  VanillaEpsGreedy(std::size_t arms, const VanillaParams& params, Rng& init_rng,
                   double init_scale = 1.0);
  VanillaEpsGreedy(std::vector<double> initial_q, const VanillaParams& params);

  std::size_t select(Rng& rng) override;
  void update(std::size_t arm, double reward) override;

  std::size_t arms() const override { return q_.size(); }
  std::span<const double> q_values() const override { return q_; }
  PolicyDiagnostics diagnostics() const override { return {params_.epsilon, params_.alpha, 0.0}; }
  std::string_view name() const override { return "vanilla"; }

 private:
  VanillaParams params_;
  std::vector<double> q_;
};

struct AdaptiveParams {
  int memory = 10;
  double eps_min = 0.05;
  double eps_max = 0.3;
  double alpha = 0.1;
  double mu_floor = 1e-9;
};

/// Reconstruction of the adaptive epsilon-greedy baseline: uniform
/// exploration, constant alpha, and epsilon set from the same change
/// quantifier AWE uses after each greedy pull.
class AdaptiveEpsGreedy final : public Policy {
 public:
  AdaptiveEpsGreedy(std::size_t arms, const AdaptiveParams& params, Rng& init_rng,
                    double init_scale = 1.0);
  AdaptiveEpsGreedy(std::vector<double> initial_q, const AdaptiveParams& params);

  std::size_t select(Rng& rng) override;
  void update(std::size_t arm, double reward) override;

  std::size_t arms() const override { return q_.size(); }
  std::span<const double> q_values() const override { return q_; }
  PolicyDiagnostics diagnostics() const override { return {epsilon_, params_.alpha, 0.0}; }
  std::string_view name() const override { return "adaptive"; }

  double epsilon() const { return epsilon_; }

 private:
  AdaptiveParams params_;
  std::vector<double> q_;
  std::vector<QHistory> history_;
  double epsilon_;
  bool greedy_flag_ = false;
};

using PolicySpec = std::variant<AweParams, VanillaParams, AdaptiveParams>;

std::string_view policy_kind_name(const PolicySpec& spec);

/// Throws std::invalid_argument when a rate or bound is outside (0,1) or
/// bounds are inverted.
void validate_policy_spec(const PolicySpec& spec);

/// Initial Q-values are uniform draws in (0,1) multiplied by init_scale.
std::vector<double> draw_initial_q(std::size_t arms, Rng& rng, double init_scale = 1.0);

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t arms, Rng& init_rng,
                                    double init_scale = 1.0);

}  // namespace cournot
