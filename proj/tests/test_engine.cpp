#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "cournot/engine.hpp"
#include "cournot/metrics.hpp"
#include "cournot/presets.hpp"
#include "cournot/report.hpp"

using namespace cournot;

namespace {

/// Always plays one arm; optionally records what it was paid.
class FixedArm final : public Policy {
 public:
  FixedArm(std::size_t arms, std::size_t arm, std::vector<double>* rewards = nullptr)
      : q_(arms, 0.0), arm_(arm), rewards_(rewards) {}
  std::size_t select(Rng&) override { return arm_; }
  void update(std::size_t arm, double reward) override {
    REQUIRE(arm == arm_);
    q_[arm] = reward;
    if (rewards_) rewards_->push_back(reward);
  }
  std::size_t arms() const override { return q_.size(); }
  std::span<const double> q_values() const override { return q_; }
  PolicyDiagnostics diagnostics() const override { return {}; }
  std::string_view name() const override { return "fixed"; }

 private:
  std::vector<double> q_;
  std::size_t arm_;
  std::vector<double>* rewards_;
};

SimConfig small(DemandPattern pattern = DemandPattern::Pattern1, std::int64_t steps = 3000) {
  SimConfig cfg = *make_preset("duopoly");
  cfg.pattern = pattern;
  cfg.steps = steps;
  return cfg;
}

std::string series(const Trace& t) {
  std::ostringstream os;
  write_series_csv(os, t);
  return os.str();
}

}  // namespace

TEST_CASE("same seed, same trace") {
  auto cfg = small(DemandPattern::Pattern3, 5000);
  cfg.master_seed = 42;
  const auto a = run_simulation(cfg);
  const auto b = run_simulation(cfg);
  CHECK(series(a) == series(b));
  cfg.master_seed = 43;
  CHECK(series(run_simulation(cfg)) != series(a));
}

TEST_CASE("window layout") {
  auto cfg = small(DemandPattern::Stationary, 1050);
  const auto t = run_simulation(cfg);
  REQUIRE(t.windows.size() == 11);
  CHECK(t.windows.front().start == 0);
  CHECK(t.windows.back().start == 1000);
  CHECK(t.windows.back().length == 50);
  for (std::size_t i = 0; i + 1 < t.windows.size(); ++i) CHECK(t.windows[i].length == 100);
  CHECK(t.steps.empty());
}

TEST_CASE("step records obey the market rules and average into windows") {
  auto cfg = small(DemandPattern::Pattern1, 1200);
  cfg.full_log = true;
  const auto t = run_simulation(cfg);
  REQUIRE(t.steps.size() == 1200);
  for (const auto& s : t.steps) {
    const auto joint = std::accumulate(s.quantities.begin(), s.quantities.end(), Quantity{0});
    REQUIRE(joint == s.joint_q);
    REQUIRE(s.price == doctest::Approx(std::max(s.demand - static_cast<double>(joint), 0.0)));
    double total = 0.0;
    for (std::size_t i = 0; i < s.quantities.size(); ++i) {
      REQUIRE(s.profits[i] == doctest::Approx((s.price - 4.0) * static_cast<double>(s.quantities[i])));
      REQUIRE(s.quantities[i] >= 0);
      REQUIRE(s.quantities[i] <= 40);
      total += s.profits[i];
    }
    REQUIRE(s.joint_profit == doctest::Approx(total));
  }
  for (const auto& w : t.windows) {
    double q = 0.0, u = 0.0;
    for (std::int64_t k = w.start; k < w.start + w.length; ++k) {
      q += static_cast<double>(t.steps[k].joint_q);
      u += t.steps[k].demand;
    }
    CHECK(w.joint_q == doctest::Approx(q / w.length));
    CHECK(w.demand == doctest::Approx(u / w.length));
  }
  // references follow the demand level
  CHECK(t.steps[0].refs.collusive_joint_q == doctest::Approx(18.0));
  CHECK(t.steps[500].refs.collusive_joint_q == doctest::Approx(8.0));
}

TEST_CASE("forced collusion has zero regret") {
  auto cfg = small(DemandPattern::Stationary, 2000);
  std::vector<double> rewards;
  std::vector<std::unique_ptr<Policy>> policies;
  policies.push_back(std::make_unique<FixedArm>(41, 9, &rewards));
  policies.push_back(std::make_unique<FixedArm>(41, 9));
  const auto t = run_simulation(cfg, std::move(policies));
  const auto s = summarize(t);
  CHECK(s.band_occupancy == 1.0);
  CHECK(s.final_collusive_regret == doctest::Approx(0.0));
  CHECK(s.mean_joint_q == doctest::Approx(18.0));
  CHECK(s.fairness_spread == 0.0);
  REQUIRE(rewards.size() == 2000);
  CHECK(rewards.front() == doctest::Approx(162.0));
}

TEST_CASE("forced competition sits on the band edge, overproduction leaves it") {
  auto cfg = small(DemandPattern::Stationary, 500);
  auto run_fixed = [&](std::size_t arm) {
    std::vector<std::unique_ptr<Policy>> p;
    p.push_back(std::make_unique<FixedArm>(41, arm));
    p.push_back(std::make_unique<FixedArm>(41, arm));
    return summarize(run_simulation(cfg, std::move(p)));
  };
  CHECK(run_fixed(18).band_occupancy == 1.0);  // joint 36 = Walrasian
  const auto over = run_fixed(19);
  CHECK(over.band_occupancy == 0.0);
  CHECK(over.negative_profit_windows == over.windows);
  CHECK(over.final_collusive_regret == doctest::Approx(500 * (324.0 + 2 * 19 * 2)));
}

TEST_CASE("agents are exchangeable") {
  auto cfg = small(DemandPattern::Pattern1, 3000);
  cfg.policies = {AweParams{}, VanillaParams{}};
  auto build = [&](bool swapped) {
    Rng init_a(101), init_b(202);
    std::vector<std::unique_ptr<Policy>> p;
    std::vector<Rng> rngs;
    auto awe = make_policy(AweParams{}, 41, init_a, 50.0);
    auto van = make_policy(VanillaParams{}, 41, init_b, 50.0);
    if (swapped) {
      p.push_back(std::move(van));
      p.push_back(std::move(awe));
      rngs = {Rng(2), Rng(1)};
    } else {
      p.push_back(std::move(awe));
      p.push_back(std::move(van));
      rngs = {Rng(1), Rng(2)};
    }
    return run_simulation(cfg, std::move(p), std::move(rngs));
  };
  const auto a = build(false);
  const auto b = build(true);
  REQUIRE(a.windows.size() == b.windows.size());
  for (std::size_t i = 0; i < a.windows.size(); ++i) {
    REQUIRE(a.windows[i].joint_q == b.windows[i].joint_q);
    REQUIRE(a.windows[i].firm_q[0] == b.windows[i].firm_q[1]);
    REQUIRE(a.windows[i].firm_profit[1] == b.windows[i].firm_profit[0]);
  }
}

TEST_CASE("demand stream does not depend on the agents") {
  auto cfg = small(DemandPattern::Pattern3, 4000);
  cfg.master_seed = 8;
  const auto two = run_simulation(cfg);
  cfg.market.firms = 3;
  cfg.market.costs = {4, 4, 4};
  cfg.policies.assign(3, AdaptiveParams{});
  const auto three = run_simulation(cfg);
  for (std::size_t i = 0; i < two.windows.size(); ++i)
    REQUIRE(two.windows[i].demand == three.windows[i].demand);
  CHECK(two.demand_change_events == three.demand_change_events);
}

TEST_CASE("diagnostics rows") {
  auto cfg = small(DemandPattern::Stationary, 1000);
  cfg.diagnostics = true;
  const auto t = run_simulation(cfg);
  REQUIRE(t.diagnostics.size() == 10);
  for (const auto& d : t.diagnostics) {
    CHECK(d.epsilon >= 0.05);
    CHECK(d.epsilon <= 0.3);
    CHECK(d.alpha >= 0.01);
    CHECK(d.alpha <= 0.3);
  }
}

TEST_CASE("initial Q scale") {
  auto cfg = small();
  CHECK(cfg.init_scale_for(0) == doctest::Approx(324.0));  // (40-4)^2 / 4
  cfg.q_init_scale = 1.0;
  CHECK(cfg.init_scale_for(0) == 1.0);
  cfg.q_init_scale = 0.0;
  cfg.market.costs = {50.0, 50.0};
  CHECK(cfg.init_scale_for(1) == 1.0);
}

TEST_CASE("config validation") {
  auto cfg = small();
  cfg.policies.pop_back();
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = small();
  cfg.steps = 0;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = small();
  cfg.log_window = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small();
  std::vector<std::unique_ptr<Policy>> p;
  p.push_back(std::make_unique<FixedArm>(10, 1));
  p.push_back(std::make_unique<FixedArm>(41, 1));
  CHECK_THROWS_AS(run_simulation(cfg, std::move(p)), std::invalid_argument);
}

TEST_CASE("asymmetric market runs with per-firm Nash references") {
  auto cfg = *make_preset("asym-duopoly-stationary");
  cfg.steps = 2000;
  const auto t = run_simulation(cfg);
  CHECK(t.windows[0].firm_nash_q[0] == doctest::Approx(41.0 / 3.0));
  CHECK(t.windows[0].firm_nash_q[1] == doctest::Approx(35.0 / 3.0));
}

TEST_CASE("presets") {
  CHECK(make_preset("duopoly-pattern1")->pattern == DemandPattern::Pattern1);
  CHECK(make_preset("fifty-firm-pattern3")->market.firms == 50);
  CHECK(make_preset("duopoly")->pattern == DemandPattern::Stationary);
  CHECK_FALSE(make_preset("duopoly-pattern9").has_value());
  CHECK_FALSE(make_preset("triopoly").has_value());
  CHECK_FALSE(make_preset("duopoly-").has_value());
  CHECK(preset_names().size() == preset_families().size() * 5);
  bool found = false;
  for (const auto& f : preset_families())
    if (describe(f).find("fifty-firm: n=50 K=50 c=20 u_s=1000") == 0) found = true;
  CHECK(found);
}
