#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cournot/engine.hpp"

namespace cournot {

/// A replication market. Concrete presets are "<family>-<pattern>", e.g.
/// "duopoly-pattern1"; the bare family name runs stationary demand.
struct PresetFamily {
  std::string name;
  MarketConfig market;
  /// Parameter keys in the order the listing prints them.
  std::vector<std::string> listing_keys;
};

const std::vector<PresetFamily>& preset_families();

/// One listing line, e.g. "duopoly: u_s=40 c=4 v=1 n=2 K=41".
std::string describe(const PresetFamily& family);

/// All concrete preset names.
std::vector<std::string> preset_names();

/// AWE agents with the default thresholds, T = 100000, log window 100, seed 1.
std::optional<SimConfig> make_preset(std::string_view name);

}  // namespace cournot
