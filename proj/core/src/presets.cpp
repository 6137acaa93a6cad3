#include "cournot/presets.hpp"

#include <fmt/format.h>

namespace cournot {

namespace {

MarketConfig market(int firms, std::vector<double> costs, double u_s, int arms) {
  MarketConfig m;
  m.firms = firms;
  m.costs = std::move(costs);
  m.slope = 1.0;
  m.base_demand = u_s;
  m.arms = arms;
  return m;
}

std::string costs_text(const MarketConfig& m) {
  if (m.symmetric()) return fmt::format("{:g}", m.costs.front());
  return fmt::format("[{:g}]", fmt::join(m.costs, ","));
}

constexpr DemandPattern kPatterns[] = {DemandPattern::Stationary, DemandPattern::Pattern1,
                                       DemandPattern::Pattern2, DemandPattern::Pattern3};

}  // namespace

const std::vector<PresetFamily>& preset_families() {
  static const std::vector<PresetFamily> families = {
      {"monopoly", market(1, {4}, 40, 41), {"n", "K", "c", "u_s", "v"}},
      {"duopoly", market(2, {4, 4}, 40, 41), {"u_s", "c", "v", "n", "K"}},
      {"ten-firm", market(10, std::vector<double>(10, 10.0), 500, 50), {"n", "K", "c", "u_s", "v"}},
      {"fifty-firm", market(50, std::vector<double>(50, 20.0), 1000, 50), {"n", "K", "c", "u_s", "v"}},
      {"scaled-actions", market(2, {4, 4}, 500, 500), {"n", "K", "c", "u_s", "v"}},
      {"asym-duopoly", market(2, {1, 3}, 40, 41), {"c", "n", "K", "u_s", "v"}},
  };
  return families;
}

std::string describe(const PresetFamily& family) {
  const auto& m = family.market;
  std::string out = family.name + ":";
  for (const auto& key : family.listing_keys) {
    if (key == "n") out += fmt::format(" n={}", m.firms);
    else if (key == "K") out += fmt::format(" K={}", m.arms);
    else if (key == "c") out += " c=" + costs_text(m);
    else if (key == "u_s") out += fmt::format(" u_s={:g}", m.base_demand);
    else if (key == "v") out += fmt::format(" v={:g}", m.slope);
  }
  return out;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& f : preset_families()) {
    names.push_back(f.name);
    for (auto p : kPatterns) names.push_back(f.name + "-" + std::string(to_string(p)));
  }
  return names;
}

std::optional<SimConfig> make_preset(std::string_view name) {
  for (const auto& f : preset_families()) {
    std::optional<DemandPattern> pattern;
    if (name == f.name) {
      pattern = DemandPattern::Stationary;
    } else if (name.starts_with(f.name) && name.size() > f.name.size() + 1 &&
               name[f.name.size()] == '-') {
      pattern = parse_pattern(name.substr(f.name.size() + 1));
    }
    if (!pattern) continue;

    SimConfig cfg;
    cfg.market = f.market;
    cfg.pattern = *pattern;
    cfg.steps = 100000;
    cfg.log_window = 100;
    cfg.master_seed = 1;
    cfg.policies.assign(static_cast<std::size_t>(f.market.firms), AweParams{});
    return cfg;
  }
  return std::nullopt;
}

}  // namespace cournot
