#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace pmic {

using Rng = std::mt19937_64;

/// Seed for the named stream `name` under `master`.
///
/// All randomness in a run flows from one master seed through named
/// substreams such as "benchmark/pair/17" or "curation/pair/3". The mapping
/// is FNV-1a 64 over the stream name, xor-ed into the master seed and passed
/// through the splitmix64 finaliser; an alternate implementation reproduces
/// the streams by seeding a standard mt19937_64 with this value.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

inline Rng substream(std::uint64_t master, std::string_view name) {
  return Rng(derive_seed(master, name));
}

inline Rng substream(std::uint64_t master, std::string_view prefix, std::uint64_t index) {
  return substream(master, std::string(prefix) + "/" + std::to_string(index));
}

}  // namespace pmic
