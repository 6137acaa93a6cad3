#include "cournot/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "cournot/presets.hpp"

namespace cournot::cli {

ConfigError::ConfigError(std::string source, int line, std::string key, std::string message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         key + ": " + message),
      source_(std::move(source)),
      line_(line),
      key_(std::move(key)),
      message_(std::move(message)) {}

namespace {

int line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line < 0 ? 0 : mark.line + 1;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& key,
                         const std::string& message) const {
    throw ConfigError(source_, line_of(node), key, message);
  }

  void require_map(const YAML::Node& node, const std::string& key) const {
    if (!node.IsMap()) fail(node, key, "expected a mapping");
  }

  void check_keys(const YAML::Node& map, const std::string& prefix,
                  std::initializer_list<const char*> allowed) const {
    for (const auto& kv : map) {
      const auto name = kv.first.as<std::string>();
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* a) { return name == a; });
      if (!known) fail(kv.first, join(prefix, name), "unknown key");
    }
  }

  double real(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key, "expected a number");
    try {
      return node.as<double>();
    } catch (const YAML::BadConversion&) {
      fail(node, key, "expected a number, got '" + node.Scalar() + "'");
    }
  }

  long long integer(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key, "expected an integer");
    try {
      return node.as<long long>();
    } catch (const YAML::BadConversion&) {
      fail(node, key, "expected an integer, got '" + node.Scalar() + "'");
    }
  }

  bool boolean(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key, "expected true or false");
    try {
      return node.as<bool>();
    } catch (const YAML::BadConversion&) {
      fail(node, key, "expected true or false, got '" + node.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key, "expected a string");
    return node.Scalar();
  }

  static std::string join(const std::string& prefix, const std::string& name) {
    return prefix.empty() ? name : prefix + "." + name;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

PolicySpec default_spec(std::string_view kind) {
  if (kind == "vanilla") return VanillaParams{};
  if (kind == "adaptive") return AdaptiveParams{};
  return AweParams{};
}

PolicySpec parse_policy(const Reader& r, const YAML::Node& node, const std::string& prefix) {
  r.require_map(node, prefix);
  std::string kind = "awe";
  if (auto k = node["kind"]) {
    kind = r.text(k, prefix + ".kind");
    if (kind != "awe" && kind != "vanilla" && kind != "adaptive")
      r.fail(k, prefix + ".kind", "unknown policy '" + kind + "' (expected awe, vanilla or adaptive)");
  }
  PolicySpec spec = default_spec(kind);

  auto set_real = [&](const char* name, double& field) {
    if (auto n = node[name]) field = r.real(n, prefix + "." + name);
  };
  auto set_int = [&](const char* name, int& field) {
    if (auto n = node[name]) field = static_cast<int>(r.integer(n, prefix + "." + name));
  };

  if (auto* p = std::get_if<AweParams>(&spec)) {
    r.check_keys(node, prefix, {"kind", "memory", "eps_min", "eps_max", "alpha_min", "alpha_max",
                                "sigma_floor", "sigma_cap", "mu_floor"});
    set_int("memory", p->memory);
    set_real("eps_min", p->eps_min);
    set_real("eps_max", p->eps_max);
    set_real("alpha_min", p->alpha_min);
    set_real("alpha_max", p->alpha_max);
    set_real("sigma_floor", p->sigma_floor);
    set_real("sigma_cap", p->sigma_cap);
    set_real("mu_floor", p->mu_floor);
  } else if (auto* v = std::get_if<VanillaParams>(&spec)) {
    r.check_keys(node, prefix, {"kind", "epsilon", "alpha"});
    set_real("epsilon", v->epsilon);
    set_real("alpha", v->alpha);
  } else if (auto* a = std::get_if<AdaptiveParams>(&spec)) {
    r.check_keys(node, prefix, {"kind", "memory", "eps_min", "eps_max", "alpha", "mu_floor"});
    set_int("memory", a->memory);
    set_real("eps_min", a->eps_min);
    set_real("eps_max", a->eps_max);
    set_real("alpha", a->alpha);
    set_real("mu_floor", a->mu_floor);
  }

  try {
    validate_policy_spec(spec);
  } catch (const std::invalid_argument& e) {
    r.fail(node, prefix, e.what());
  }
  return spec;
}

void parse_market(const Reader& r, const YAML::Node& node, MarketConfig& m) {
  r.require_map(node, "market");
  r.check_keys(node, "market", {"firms", "costs", "v", "u_s", "arms"});

  const auto base_costs = m.costs;
  if (auto n = node["firms"]) {
    const auto firms = r.integer(n, "market.firms");
    if (firms < 1) r.fail(n, "market.firms", "must be >= 1");
    m.firms = static_cast<int>(firms);
  }
  if (auto n = node["arms"]) {
    const auto arms = r.integer(n, "market.arms");
    if (arms < 2) r.fail(n, "market.arms", "must be >= 2");
    m.arms = static_cast<int>(arms);
  }
  if (auto n = node["v"]) {
    m.slope = r.real(n, "market.v");
    if (!(m.slope > 0.0)) r.fail(n, "market.v", "must be > 0");
  }
  if (auto n = node["u_s"]) {
    m.base_demand = r.real(n, "market.u_s");
    if (!(m.base_demand > 0.0)) r.fail(n, "market.u_s", "must be > 0");
  }

  const auto firms = static_cast<std::size_t>(m.firms);
  if (auto n = node["costs"]) {
    std::vector<double> costs;
    if (n.IsSequence()) {
      for (std::size_t i = 0; i < n.size(); ++i)
        costs.push_back(r.real(n[i], "market.costs[" + std::to_string(i) + "]"));
      if (costs.size() != firms)
        r.fail(n, "market.costs",
               "has " + std::to_string(costs.size()) + " entries but market.firms is " +
                   std::to_string(firms));
    } else {
      costs.assign(firms, r.real(n, "market.costs"));
    }
    for (std::size_t i = 0; i < costs.size(); ++i)
      if (!(costs[i] >= 0.0)) r.fail(n, "market.costs", "must be non-negative");
    m.costs = std::move(costs);
  } else if (m.costs.size() != firms) {
    const bool uniform = std::adjacent_find(base_costs.begin(), base_costs.end(),
                                            std::not_equal_to<>()) == base_costs.end();
    if (!uniform || base_costs.empty())
      r.fail(node["firms"], "market.firms",
             "changing the firm count of an asymmetric market needs explicit market.costs");
    m.costs.assign(firms, base_costs.front());
  }
}

void parse_demand(const Reader& r, const YAML::Node& node, SimConfig& cfg) {
  r.require_map(node, "demand");
  r.check_keys(node, "demand", {"pattern", "gamma", "shock_mu", "shock_sigma"});
  if (auto n = node["pattern"]) {
    const auto name = r.text(n, "demand.pattern");
    const auto pattern = parse_pattern(name);
    if (!pattern)
      r.fail(n, "demand.pattern",
             "unknown pattern '" + name + "' (expected stationary, pattern1, pattern2 or pattern3)");
    cfg.pattern = *pattern;
  }
  if (auto n = node["gamma"]) {
    cfg.gamma = r.real(n, "demand.gamma");
    if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) r.fail(n, "demand.gamma", "must lie in [0, 1]");
  }
  if (auto n = node["shock_mu"]) cfg.shock_mu = r.real(n, "demand.shock_mu");
  if (auto n = node["shock_sigma"]) {
    cfg.shock_sigma = r.real(n, "demand.shock_sigma");
    if (!(cfg.shock_sigma >= 0.0)) r.fail(n, "demand.shock_sigma", "must be >= 0");
  }
}

void parse_simulation(const Reader& r, const YAML::Node& node, SimConfig& cfg) {
  r.require_map(node, "simulation");
  r.check_keys(node, "simulation",
               {"steps", "seed", "log_window", "q_init_scale", "full_log", "diagnostics"});
  if (auto n = node["steps"]) {
    cfg.steps = r.integer(n, "simulation.steps");
    if (cfg.steps < 1) r.fail(n, "simulation.steps", "must be >= 1");
  }
  if (auto n = node["seed"]) {
    const auto seed = r.integer(n, "simulation.seed");
    if (seed < 0) r.fail(n, "simulation.seed", "must be >= 0");
    cfg.master_seed = static_cast<std::uint64_t>(seed);
  }
  if (auto n = node["log_window"]) {
    cfg.log_window = r.integer(n, "simulation.log_window");
    if (cfg.log_window < 1) r.fail(n, "simulation.log_window", "must be >= 1");
  }
  if (auto n = node["q_init_scale"]) {
    if (n.IsScalar() && n.Scalar() == "auto") {
      cfg.q_init_scale = 0.0;
    } else {
      cfg.q_init_scale = r.real(n, "simulation.q_init_scale");
      if (!(cfg.q_init_scale > 0.0)) r.fail(n, "simulation.q_init_scale", "must be > 0 or 'auto'");
    }
  }
  if (auto n = node["full_log"]) cfg.full_log = r.boolean(n, "simulation.full_log");
  if (auto n = node["diagnostics"]) cfg.diagnostics = r.boolean(n, "simulation.diagnostics");
}

}  // namespace

SimConfig preset_config(const std::string& name, const std::string& source) {
  if (auto cfg = make_preset(name)) return *cfg;
  throw ConfigError(source, 0, "preset", "unknown preset '" + name + "' (see `cournot-sim presets`)");
}

SimConfig parse_config(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line < 0 ? 0 : e.mark.line + 1, "yaml", e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  r.require_map(root, "config");
  r.check_keys(root, "", {"preset", "market", "demand", "simulation", "policy", "policies"});

  SimConfig cfg;
  if (auto n = root["preset"]) {
    const auto name = r.text(n, "preset");
    auto preset = make_preset(name);
    if (!preset) r.fail(n, "preset", "unknown preset '" + name + "'");
    cfg = *preset;
  }
  if (auto n = root["market"]) parse_market(r, n, cfg.market);
  if (auto n = root["demand"]) parse_demand(r, n, cfg);
  if (auto n = root["simulation"]) parse_simulation(r, n, cfg);

  const auto firms = static_cast<std::size_t>(cfg.market.firms);
  if (auto n = root["policies"]) {
    if (!n.IsSequence()) r.fail(n, "policies", "expected a list with one entry per firm");
    if (n.size() != firms)
      r.fail(n, "policies",
             "has " + std::to_string(n.size()) + " entries but market.firms is " +
                 std::to_string(firms));
    cfg.policies.clear();
    for (std::size_t i = 0; i < n.size(); ++i)
      cfg.policies.push_back(parse_policy(r, n[i], "policies[" + std::to_string(i) + "]"));
    if (root["policy"]) r.fail(root["policy"], "policy", "give either policy or policies, not both");
  } else if (auto p = root["policy"]) {
    cfg.policies.assign(firms, parse_policy(r, p, "policy"));
  } else if (cfg.policies.size() != firms) {
    cfg.policies.assign(firms, AweParams{});
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, 0, "config", e.what());
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "config", "cannot read file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace cournot::cli
