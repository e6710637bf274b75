#pragma once

#include <cstdint>
#include <random>

#include "posmat/core.hpp"

namespace posmat {

// Engine output is fixed by the C++ standard; distributions come from
// Boost.Random, whose algorithms do not vary between standard libraries.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
// Independent stream for item `index` under master seed `seed`.
Rng derive_stream(std::uint64_t seed, std::uint64_t index);

int uniform_int(Rng& rng, int lo, int hi);  // inclusive bounds
double uniform01(Rng& rng);
bool coin(Rng& rng);
Vote random_permutation(int m, Rng& rng);

}  // namespace posmat
