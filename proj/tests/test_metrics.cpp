#include <doctest.h>

#include <random>

#include "cournot/metrics.hpp"
#include "cournot/sweep.hpp"

using namespace cournot;

namespace {

WindowRow row(std::int64_t start, double joint_q, double lo = 18, double hi = 36) {
  WindowRow w;
  w.start = start;
  w.length = 100;
  w.joint_q = joint_q;
  w.collusive_q = lo;
  w.walras_q = hi;
  w.firm_q = {joint_q / 2, joint_q / 2};
  w.firm_nash_q = {12, 12};
  return w;
}

}  // namespace

TEST_CASE("rolling average uses non-overlapping windows") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
  CHECK(rolling_average(x, 3) == std::vector<double>{2, 5, 7});
  CHECK(rolling_average(x, 10) == std::vector<double>{4});
  CHECK_THROWS(rolling_average(x, 0));
}

TEST_CASE("band occupancy counts closed-interval hits") {
  const std::vector<double> q{17, 18, 24, 36, 37};
  const std::vector<double> lo(5, 18), hi(5, 36);
  CHECK(band_occupancy(q, lo, hi) == doctest::Approx(0.6));
  CHECK_THROWS_AS(band_occupancy(q, lo, std::vector<double>(4, 36)), std::invalid_argument);
}

TEST_CASE("recovery time") {
  std::vector<WindowRow> w;
  for (int i = 0; i < 10; ++i) w.push_back(row(i * 100, 24));
  w[3].joint_q = 40;
  w[4].joint_q = 40;
  w[7].joint_q = 5;
  for (int i = 7; i < 10; ++i) w[i].joint_q = 5;
  const std::vector<std::int64_t> bps{300, 250, 600, 0};
  const auto r = recovery_time(w, bps);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == 200);          // out at 300 and 400, back at 500
  CHECK(r[1] == 200);          // first window at or after 250 starts at 300
  CHECK(r[2] == 0);            // already inside
  CHECK(r[3] == 0);
  const std::vector<std::int64_t> late{700};
  CHECK_FALSE(recovery_time(w, late)[0].has_value());
}

TEST_CASE("regret accumulates collusive shortfall per step") {
  std::vector<WindowRow> w{row(0, 24), row(100, 18)};
  w[0].collusive_profit = 324;
  w[0].joint_profit = 288;
  w[1].collusive_profit = 324;
  w[1].joint_profit = 324;
  w[1].length = 50;
  const auto r = joint_cumulative_regret(w);
  CHECK(r == std::vector<double>{3600, 3600});
}

TEST_CASE("fairness spread") {
  CHECK(fairness_spread(std::vector<double>{12, 11.5, 12.75}) == doctest::Approx(1.25));
  CHECK(fairness_spread(std::vector<double>{3}) == 0.0);
  CHECK_THROWS_AS(fairness_spread(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("tail means cover the trailing fraction") {
  std::vector<WindowRow> w;
  for (int i = 0; i < 100; ++i) w.push_back(row(i * 100, i < 90 ? 20 : 30));
  const auto tail = tail_means(w, 0.1);
  CHECK(tail.steps == 1000);
  CHECK(tail.firm_q[0] == doctest::Approx(15.0));
}

TEST_CASE("medians") {
  CHECK(median(std::vector<double>{3, 1, 2}) == 2);
  CHECK(median(std::vector<double>{4, 1, 2, 3}) == 2.5);
  using O = std::optional<double>;
  CHECK(median(std::vector<O>{O{}, O{1}, O{5}}) == O{5});
  CHECK_FALSE(median(std::vector<O>{O{}, O{}, O{5}}).has_value());
  CHECK_THROWS(median(std::vector<double>{}));
}

TEST_CASE("band occupancy property: bounded and monotone in the band") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0, 50);
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> q(20), lo(20, 18), hi(20, 36), wide(20, 40);
    for (double& x : q) x = d(rng);
    const double narrow = band_occupancy(q, lo, hi);
    REQUIRE(narrow >= 0.0);
    REQUIRE(narrow <= 1.0);
    REQUIRE(band_occupancy(q, lo, wide) >= narrow);
  }
}

TEST_CASE("rolling average commutes with scaling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-10, 10);
  std::vector<double> x(997);
  for (double& v : x) v = d(rng);
  auto scaled = x;
  for (double& v : scaled) v *= 3.5;
  const auto a = rolling_average(x, 100);
  const auto b = rolling_average(scaled, 100);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(3.5 * a[i]));
}

TEST_CASE("band occupancy is homogeneous in the market scale") {
  // Scaling u - c and all quantities by the same factor scales every band edge too.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0, 60);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> q(25), lo(25, 18.0), hi(25, 36.0);
    for (double& v : q) v = d(rng);
    const double k = 1.0 + static_cast<double>(rng() % 20);
    auto qs = q, los = lo, his = hi;
    for (double& v : qs) v *= k;
    for (double& v : los) v *= k;
    for (double& v : his) v *= k;
    REQUIRE(band_occupancy(q, lo, hi) == band_occupancy(qs, los, his));
  }
}
