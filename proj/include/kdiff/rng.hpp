#pragma once

#include "kdiff/grid.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kdiff {

/// Caller-owned random stream. No module keeps hidden global RNG state.
using Rng = std::mt19937_64;

/// Independent stream derived from a base seed and a path of tags
/// (e.g. {sample index, slot index}).
Rng derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {});

/// Grid whose 2*H*W real components are i.i.d. N(0, 1).
ComplexGrid complex_normal(Shape shape, Domain domain, Rng &rng);

} // namespace kdiff
