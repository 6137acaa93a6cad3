#include <benchmark/benchmark.h>

#include "cournot/agents.hpp"
#include "cournot/engine.hpp"
#include "cournot/market.hpp"
#include "cournot/presets.hpp"

using namespace cournot;

namespace {

void simulate(benchmark::State& state, const char* preset) {
  auto cfg = *make_preset(preset);
  cfg.steps = state.range(0);
  for (auto _ : state) {
    auto trace = run_simulation(cfg);
    benchmark::DoNotOptimize(trace.windows.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.steps);
  state.counters["agent_steps/s"] = benchmark::Counter(
      static_cast<double>(state.iterations() * cfg.steps * cfg.market.firms),
      benchmark::Counter::kIsRate);
}

void BM_DuopolyPattern1(benchmark::State& state) { simulate(state, "duopoly-pattern1"); }
void BM_FiftyFirmPattern1(benchmark::State& state) { simulate(state, "fifty-firm-pattern1"); }
void BM_ScaledActionsPattern1(benchmark::State& state) { simulate(state, "scaled-actions-pattern1"); }

void BM_NormalWeights(benchmark::State& state) {
  const auto arms = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto w = normal_weights(arms, arms / 3, 7.5);
    benchmark::DoNotOptimize(w.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AweSelectUpdate(benchmark::State& state) {
  const auto arms = static_cast<std::size_t>(state.range(0));
  Rng init(1), rng(2);
  AwePolicy p(arms, AweParams{}, init, 100.0);
  double reward = 50.0;
  for (auto _ : state) {
    const auto arm = p.select(rng);
    reward = 0.9 * reward + static_cast<double>(arm % 7);
    p.update(arm, reward);
  }
}

void BM_BestResponseOracle(benchmark::State& state) {
  const auto cfg = *make_preset("ten-firm");
  for (auto _ : state) {
    auto r = nash_via_best_response(cfg.market.base_demand, cfg.market, 1000);
    benchmark::DoNotOptimize(r.profile.data());
  }
}

}  // namespace

BENCHMARK(BM_DuopolyPattern1)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FiftyFirmPattern1)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScaledActionsPattern1)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormalWeights)->Arg(41)->Arg(500);
BENCHMARK(BM_AweSelectUpdate)->Arg(41)->Arg(500);
BENCHMARK(BM_BestResponseOracle);
BENCHMARK_MAIN();
