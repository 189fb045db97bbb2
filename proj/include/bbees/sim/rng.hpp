#pragma once

#include <cstdint>
#include <random>

namespace bbees {

/// Generator used by every simulation routine.
using Rng = std::mt19937_64;

/// SplitMix64 output function applied to x.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream `stream` (replica index) of base seed `seed`:
/// mt19937_64 seeded with splitmix64(seed ^ splitmix64(stream + 1)).
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

}  // namespace bbees
