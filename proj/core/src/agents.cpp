#include "cournot/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cournot {

QHistory::QHistory(std::size_t capacity) : buffer_(capacity, 0.0) {
  if (capacity == 0) throw std::invalid_argument("QHistory: capacity must be >= 1");
}

void QHistory::push(double value) {
  buffer_[(head_ + size_) % buffer_.size()] = value;
  if (size_ < buffer_.size())
    ++size_;
  else
    head_ = (head_ + 1) % buffer_.size();
}

double QHistory::operator[](std::size_t i) const { return buffer_[(head_ + i) % buffer_.size()]; }

double QHistory::mean() const {
  if (size_ == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < size_; ++i) sum += (*this)[i];
  return sum / static_cast<double>(size_);
}

double QHistory::sample_std() const {
  if (size_ < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    const double d = (*this)[i] - m;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(size_ - 1));
}

std::size_t argmax_lowest(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double target = uniform01(rng) * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    cumulative += weights[k];
    last_positive = k;
    if (target < cumulative) return k;
  }
  return last_positive;
}

double quantify_change(double reward, double mu_bar, double fallback, double mu_floor) {
  if (std::abs(mu_bar) < mu_floor) return fallback;
  return std::abs((reward - mu_bar) / mu_bar);
}

std::vector<double> normal_weights(std::size_t arms, std::size_t center, double sigma) {
  std::vector<double> w(arms);
  double total = 0.0;
  for (std::size_t k = 0; k < arms; ++k) {
    const double z = (static_cast<double>(k) - static_cast<double>(center)) / sigma;
    w[k] = std::exp(-0.5 * z * z);
    total += w[k];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(arms));
    return w;
  }
  for (double& x : w) x /= total;
  return w;
}

std::optional<std::vector<double>> recompute_weights(std::span<const double> q,
                                                     const QHistory& greedy_history,
                                                     double sigma_floor, double sigma_cap) {
  if (greedy_history.size() < 2) return std::nullopt;
  const double sigma = std::clamp(greedy_history.sample_std(), sigma_floor, sigma_cap);
  return normal_weights(q.size(), argmax_lowest(q), sigma);
}

std::vector<double> draw_initial_q(std::size_t arms, Rng& rng, double init_scale) {
  if (arms < 2) throw std::invalid_argument("policy: need at least 2 arms");
  if (!(init_scale > 0.0)) throw std::invalid_argument("policy: init scale must be > 0");
  std::vector<double> q(arms);
  for (double& x : q) {
    do x = uniform01(rng);
    while (x <= 0.0);
    x *= init_scale;
  }
  return q;
}

namespace {

void check_arm(std::size_t arm, std::size_t arms) {
  if (arm >= arms)
    throw std::invalid_argument("policy update: arm " + std::to_string(arm) + " out of range [0, " +
                                std::to_string(arms) + ")");
}

std::vector<QHistory> make_histories(std::size_t arms, int memory) {
  return std::vector<QHistory>(arms, QHistory(static_cast<std::size_t>(memory)));
}

}  // namespace

// ---------------------------------------------------------------------------

AwePolicy::AwePolicy(std::size_t arms, const AweParams& params, Rng& init_rng,
                      double init_scale)
    : AwePolicy(draw_initial_q(arms, init_rng, init_scale), params) {}

AwePolicy::AwePolicy(std::vector<double> initial_q, const AweParams& params) : params_(params) {
  validate_policy_spec(params_);
  if (initial_q.size() < 2) throw std::invalid_argument("policy: need at least 2 arms");
  const auto arms = initial_q.size();
  sigma_cap_ = params_.sigma_cap > 0.0 ? params_.sigma_cap : static_cast<double>(arms);
  sigma_cap_ = std::max(sigma_cap_, params_.sigma_floor);

  state_.q = std::move(initial_q);
  // Exploration weights start proportional to the initial Q-values.
  state_.weights.assign(state_.q.begin(), state_.q.end());
  const double total = std::accumulate(state_.weights.begin(), state_.weights.end(), 0.0);
  if (total > 0.0 && std::all_of(state_.weights.begin(), state_.weights.end(),
                                 [](double w) { return w >= 0.0; })) {
    for (double& w : state_.weights) w /= total;
  } else {
    std::fill(state_.weights.begin(), state_.weights.end(), 1.0 / static_cast<double>(arms));
  }
  state_.epsilon = params_.eps_max;
  state_.alpha = params_.alpha_max;
  state_.history = make_histories(arms, params_.memory);
}

std::size_t AwePolicy::select(Rng& rng) {
  if (uniform01(rng) < state_.epsilon) {
    state_.greedy_flag = false;
    return sample_categorical(state_.weights, rng);
  }
  state_.greedy_flag = true;
  return argmax_lowest(state_.q);
}

void AwePolicy::update(std::size_t arm, double reward) {
  check_arm(arm, arms());
  auto& q = state_.q;
  q[arm] = state_.alpha * reward + (1.0 - state_.alpha) * q[arm];
  auto& hist = state_.history[arm];
  hist.push(q[arm]);

  if (!state_.greedy_flag) return;
  state_.greedy_flag = false;
  if (hist.size() < 2) return;

  ChangeStats stats;
  stats.mu_bar = hist.mean();
  stats.mu_hat = argmax_lowest(q);
  stats.sigma_hat = std::clamp(hist.sample_std(), params_.sigma_floor, sigma_cap_);
  state_.weights = normal_weights(arms(), stats.mu_hat, stats.sigma_hat);

  stats.new_rate = quantify_change(reward, stats.mu_bar, params_.eps_max, params_.mu_floor);
  state_.epsilon = std::clamp(stats.new_rate, params_.eps_min, params_.eps_max);
  state_.alpha = std::clamp(stats.new_rate, params_.alpha_min, params_.alpha_max);
  state_.last_change = stats;
}

PolicyDiagnostics AwePolicy::diagnostics() const {
  return {state_.epsilon, state_.alpha, state_.last_change ? state_.last_change->sigma_hat : 0.0};
}

void AwePolicy::set_weights(std::vector<double> weights) {
  if (weights.size() != arms()) throw std::invalid_argument("set_weights: size mismatch");
  state_.weights = std::move(weights);
}

// ---------------------------------------------------------------------------

VanillaEpsGreedy::VanillaEpsGreedy(std::size_t arms, const VanillaParams& params, Rng& init_rng,
                                    double init_scale)
    : VanillaEpsGreedy(draw_initial_q(arms, init_rng, init_scale), params) {}

VanillaEpsGreedy::VanillaEpsGreedy(std::vector<double> initial_q, const VanillaParams& params)
    : params_(params), q_(std::move(initial_q)) {
  if (q_.size() < 2) throw std::invalid_argument("policy: need at least 2 arms");
  if (!(params_.epsilon >= 0.0 && params_.epsilon <= 1.0))
    throw std::invalid_argument("vanilla: epsilon must lie in [0, 1]");
  if (!(params_.alpha > 0.0 && params_.alpha <= 1.0))
    throw std::invalid_argument("vanilla: alpha must lie in (0, 1]");
}

std::size_t VanillaEpsGreedy::select(Rng& rng) {
  if (uniform01(rng) < params_.epsilon)
    return std::uniform_int_distribution<std::size_t>{0, q_.size() - 1}(rng);
  return argmax_lowest(q_);
}

void VanillaEpsGreedy::update(std::size_t arm, double reward) {
  check_arm(arm, q_.size());
  q_[arm] = params_.alpha * reward + (1.0 - params_.alpha) * q_[arm];
}

// ---------------------------------------------------------------------------

AdaptiveEpsGreedy::AdaptiveEpsGreedy(std::size_t arms, const AdaptiveParams& params, Rng& init_rng,
                                      double init_scale)
    : AdaptiveEpsGreedy(draw_initial_q(arms, init_rng, init_scale), params) {}

AdaptiveEpsGreedy::AdaptiveEpsGreedy(std::vector<double> initial_q, const AdaptiveParams& params)
    : params_(params), q_(std::move(initial_q)), epsilon_(params.eps_max) {
  validate_policy_spec(params_);
  if (q_.size() < 2) throw std::invalid_argument("policy: need at least 2 arms");
  history_ = make_histories(q_.size(), params_.memory);
}

std::size_t AdaptiveEpsGreedy::select(Rng& rng) {
  if (uniform01(rng) < epsilon_) {
    greedy_flag_ = false;
    return std::uniform_int_distribution<std::size_t>{0, q_.size() - 1}(rng);
  }
  greedy_flag_ = true;
  return argmax_lowest(q_);
}

void AdaptiveEpsGreedy::update(std::size_t arm, double reward) {
  check_arm(arm, q_.size());
  q_[arm] = params_.alpha * reward + (1.0 - params_.alpha) * q_[arm];
  auto& hist = history_[arm];
  hist.push(q_[arm]);
  if (!greedy_flag_) return;
  greedy_flag_ = false;
  if (hist.size() < 2) return;
  const double rate = quantify_change(reward, hist.mean(), params_.eps_max, params_.mu_floor);
  epsilon_ = std::clamp(rate, params_.eps_min, params_.eps_max);
}

// ---------------------------------------------------------------------------

std::string_view policy_kind_name(const PolicySpec& spec) {
  struct Visitor {
    std::string_view operator()(const AweParams&) const { return "awe"; }
    std::string_view operator()(const VanillaParams&) const { return "vanilla"; }
    std::string_view operator()(const AdaptiveParams&) const { return "adaptive"; }
  };
  return std::visit(Visitor{}, spec);
}

namespace {

void require_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in (0, 1)");
}

}  // namespace

void validate_policy_spec(const PolicySpec& spec) {
  struct Visitor {
    void operator()(const AweParams& p) const {
      if (p.memory < 2) throw std::invalid_argument("awe: memory must be >= 2");
      require_open_unit(p.eps_min, "awe: eps_min");
      require_open_unit(p.eps_max, "awe: eps_max");
      require_open_unit(p.alpha_min, "awe: alpha_min");
      require_open_unit(p.alpha_max, "awe: alpha_max");
      if (p.eps_min > p.eps_max) throw std::invalid_argument("awe: eps_min > eps_max");
      if (p.alpha_min > p.alpha_max) throw std::invalid_argument("awe: alpha_min > alpha_max");
      if (!(p.sigma_floor > 0.0)) throw std::invalid_argument("awe: sigma_floor must be > 0");
      if (p.sigma_cap < 0.0) throw std::invalid_argument("awe: sigma_cap must be >= 0");
      if (!(p.mu_floor > 0.0)) throw std::invalid_argument("awe: mu_floor must be > 0");
    }
    void operator()(const VanillaParams& p) const {
      require_open_unit(p.epsilon, "vanilla: epsilon");
      require_open_unit(p.alpha, "vanilla: alpha");
    }
    void operator()(const AdaptiveParams& p) const {
      if (p.memory < 2) throw std::invalid_argument("adaptive: memory must be >= 2");
      require_open_unit(p.eps_min, "adaptive: eps_min");
      require_open_unit(p.eps_max, "adaptive: eps_max");
      require_open_unit(p.alpha, "adaptive: alpha");
      if (p.eps_min > p.eps_max) throw std::invalid_argument("adaptive: eps_min > eps_max");
      if (!(p.mu_floor > 0.0)) throw std::invalid_argument("adaptive: mu_floor must be > 0");
    }
  };
  std::visit(Visitor{}, spec);
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t arms, Rng& init_rng,
                                    double init_scale) {
  validate_policy_spec(spec);
  struct Visitor {
    std::size_t arms;
    Rng& rng;
    double scale;
    std::unique_ptr<Policy> operator()(const AweParams& p) const {
      return std::make_unique<AwePolicy>(arms, p, rng, scale);
    }
    std::unique_ptr<Policy> operator()(const VanillaParams& p) const {
      return std::make_unique<VanillaEpsGreedy>(arms, p, rng, scale);
    }
    std::unique_ptr<Policy> operator()(const AdaptiveParams& p) const {
      return std::make_unique<AdaptiveEpsGreedy>(arms, p, rng, scale);
    }
  };
  return std::visit(Visitor{arms, init_rng, init_scale}, spec);
}

}  // namespace cournot
