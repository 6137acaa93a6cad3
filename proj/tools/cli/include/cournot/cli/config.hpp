#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "cournot/engine.hpp"

namespace cournot::cli {

/// Configuration problem with the position it was found at. what() is
/// "<source>:<line>: <key>: <message>"; the line (1-based) is
/// left out when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string key, std::string message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& key() const { return key_; }
  const std::string& message() const { return message_; }

 private:
  std::string source_;
  int line_;
  std::string key_;
  std::string message_;
};

/// Parses a YAML experiment config. Schema (every section optional, unknown
/// keys rejected):
///
///   preset: duopoly-pattern1      # start from a named preset
///   market:     { firms, costs (number or list), v, u_s, arms }
///   demand:     { pattern, gamma, shock_mu, shock_sigma }
///   simulation: { steps, seed, log_window, q_init_scale (auto|number),
///                 full_log, diagnostics }
///   policy:     { kind: awe|vanilla|adaptive, <kind parameters> }
///   policies:   [ {kind: ..., ...}, ... ]   # one per firm, overrides policy
///
/// Parameters: awe {memory, eps_min, eps_max, alpha_min, alpha_max,
/// sigma_floor, sigma_cap, mu_floor}; vanilla {epsilon, alpha};
/// adaptive {memory, eps_min, eps_max, alpha, mu_floor}.
SimConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Reads and parses a file. Unreadable files raise ConfigError with line 0.
SimConfig load_config(const std::filesystem::path& path);

/// Resolves a preset name or throws ConfigError naming `preset`.
SimConfig preset_config(const std::string& name, const std::string& source = "--preset");

}  // namespace cournot::cli
