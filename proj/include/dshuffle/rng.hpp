#pragma once

#include <cstdint>
#include <random>

namespace dshuffle {

// Engine used by every stochastic operator. A fixed engine type keeps streams
// identical across runs of the same build.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
	z += 0x9e3779b97f4a7c15ULL;
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

// Seed for copy `copy` of window `window` under a batch seed. Depends only on
// the triple, so batch order and thread count never change a stream.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t window, std::uint64_t copy) noexcept {
	return mix64(mix64(mix64(seed) ^ window) ^ (copy * 0xd6e8feb86659fd93ULL));
}

} // namespace dshuffle
