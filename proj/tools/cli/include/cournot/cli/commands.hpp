#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cournot/engine.hpp"

namespace cournot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Where the experiment came from: a config file or a preset name.
struct ConfigSource {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> preset;
};

struct RunOptions {
  ConfigSource source;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = "out";
  bool full_log = false;
  bool diagnostics = false;
};

struct SweepCmdOptions {
  ConfigSource source;
  std::string seeds = "1..5";
  unsigned jobs = 0;  ///< 0 = default_jobs()
  std::filesystem::path out_dir = "out";
};

struct DemandCmdOptions {
  ConfigSource source;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;  ///< stdout when unset
};

/// "1..5", "1,4,9" or "7". Throws ConfigError on bad syntax or an empty range.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Hardware concurrency, capped by the COURNOT_MAX_JOBS environment variable.
unsigned default_jobs();

/// Hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepCmdOptions& options, std::ostream& out, std::ostream& err);
int cmd_presets(std::ostream& out);
int cmd_demand(const DemandCmdOptions& options, std::ostream& out, std::ostream& err);

}  // namespace cournot::cli
