#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "nlslab/common.hpp"

namespace nlslab {

// Counter-based randomness: every draw is a pure function of (seed, counter),
// so results do not depend on iteration order or thread scheduling.
namespace rng {

uint64_t mix64(uint64_t z);

// Labeled sub-seed derivation for handing one global seed to many modules.
uint64_t derive(uint64_t seed, std::string_view label);
uint64_t derive(uint64_t seed, uint64_t index);

// Uniform in (0, 1].
double uniform(uint64_t seed, uint64_t counter);

// Complex Gaussian with E g = 0, E|g|^2 = 1 (Re and Im independent N(0,1/2)).
cplx unit_complex_gaussian(uint64_t seed, uint64_t counter);

// Real standard normal.
double standard_normal(uint64_t seed, uint64_t counter);

// Stable 64-bit counter for an integer lattice point (zig-zag packed,
// 16 bits per axis), independent of any grid bound.
uint64_t lattice_counter(const std::vector<int>& k);

}  // namespace rng

}  // namespace nlslab
