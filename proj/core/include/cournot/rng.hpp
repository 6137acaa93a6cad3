#pragma once

#include <cstdint>
#include <random>

namespace cournot {

using Rng = std::mt19937_64;

/// Independent random streams split off one master seed. A stream is keyed
/// by (tag, index) so adding a new consumer never shifts an existing one.
enum class StreamTag : std::uint64_t {
  Demand = 1,
  Agent = 2,
};

std::uint64_t splitmix64(std::uint64_t& state);

std::uint64_t derive_seed(std::uint64_t master_seed, StreamTag tag, std::uint64_t index = 0);

inline Rng make_stream(std::uint64_t master_seed, StreamTag tag, std::uint64_t index = 0) {
  return Rng{derive_seed(master_seed, tag, index)};
}

/// Uniform draw in [0, 1).
inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>{0.0, 1.0}(rng); }

}  // namespace cournot
