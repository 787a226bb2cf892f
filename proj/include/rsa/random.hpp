#pragma once

#include <cstdint>
#include <random>

namespace rsa {

using Rng = std::mt19937_64;

/// Mixes (seed, stream) into a new seed with two splitmix64 rounds. Streams
/// keyed by distinct counters are independent of the order they are created in.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream));
}

}  // namespace rsa
