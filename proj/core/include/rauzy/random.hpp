#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "rauzy/numeric.hpp"

namespace rauzy {

/// Independent deterministic stream for sample `index` of a run seeded with `seed`.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform integer in [0, 2^bits).
BigInt random_bits(std::mt19937_64& rng, std::size_t bits);

/// Uniform in [0,1) with 53 random bits.
double uniform01(std::mt19937_64& rng);

/// Lebesgue-uniform point of the open simplex, exact: spacings of d-1 sorted
/// uniform integers in [0, 2^bits), divided by 2^bits. Zero spacings are
/// resampled.
RatVec random_simplex_point(std::mt19937_64& rng, std::size_t d, std::size_t bits);

}  // namespace rauzy
