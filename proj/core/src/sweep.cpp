#include "cournot/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace cournot {

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::optional<double> median(std::vector<std::optional<double>> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
  });
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2) return values[mid];
  if (!values[mid - 1] || !values[mid]) return std::nullopt;
  return 0.5 * (*values[mid - 1] + *values[mid]);
}

namespace {

SweepMedians compute_medians(const std::vector<SweepRun>& runs) {
  SweepMedians m;
  std::vector<const SimSummary*> ok;
  for (const auto& r : runs) {
    if (r.ok() && r.summary)
      ok.push_back(&*r.summary);
    else
      ++m.failed;
  }
  m.succeeded = ok.size();
  if (ok.empty()) return m;

  auto collect = [&](auto field) {
    std::vector<double> v;
    for (const auto* s : ok) v.push_back(field(*s));
    return median(std::move(v));
  };
  m.band_occupancy = collect([](const SimSummary& s) { return s.band_occupancy; });
  m.final_collusive_regret = collect([](const SimSummary& s) { return s.final_collusive_regret; });
  m.fairness_spread = collect([](const SimSummary& s) { return s.fairness_spread; });
  m.above_walras_profit_fraction =
      collect([](const SimSummary& s) { return s.above_walras_profit_fraction; });

  const std::size_t n_bp = ok.front()->recovery_times.size();
  for (std::size_t b = 0; b < n_bp; ++b) {
    std::vector<std::optional<double>> v;
    for (const auto* s : ok) {
      const auto& r = s->recovery_times[b];
      v.push_back(r ? std::optional<double>(static_cast<double>(*r)) : std::nullopt);
    }
    m.recovery_times.push_back(median(std::move(v)));
  }
  return m;
}

}  // namespace

SweepResult run_sweep(const SimConfig& tmpl, const std::vector<std::uint64_t>& seeds,
                      const SweepOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("run_sweep: empty seed list");

  SweepResult result;
  result.runs.resize(seeds.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      SweepRun& run = result.runs[i];
      run.seed = seeds[i];
      try {
        SimConfig cfg = tmpl;
        cfg.master_seed = seeds[i];
        Trace trace = run_simulation(cfg);
        run.summary = summarize(trace);
        run.trace = std::move(trace);
      } catch (const std::exception& e) {
        run.error = e.what();
      }
      if (options.on_complete) {
        try {
          options.on_complete(run);
        } catch (const std::exception& e) {
          if (run.error.empty()) run.error = e.what();
        }
      }
      if (!options.keep_traces) run.trace.reset();
    }
  };

  const unsigned jobs = std::clamp<unsigned>(options.jobs, 1u, static_cast<unsigned>(seeds.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  result.medians = compute_medians(result.runs);
  return result;
}

}  // namespace cournot
