#pragma once

#include "dshuffle/augment.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dshuffle::augment {

// Originals followed by (multiplier - 1) augmented copies of every window:
// output[c * n + i] is copy c of window i, copy 0 being the untouched
// original. Copy c >= 1 of window i draws from an Rng seeded with
// derive_seed(spec.seed, i, c); FreqMix picks its donor j != i from that same
// stream. Windows are processed in parallel (OpenMP) and the result is
// bit-identical to serial::augment_batch.
//
// multiplier == 1 returns the originals without touching any operator.
std::vector<AugmentedWindow> augment_batch(std::span<const SeriesWindow> windows, const AugmentSpec& spec,
                                           std::size_t multiplier);

namespace serial {

// Single-threaded reference for augment_batch.
std::vector<AugmentedWindow> augment_batch(std::span<const SeriesWindow> windows, const AugmentSpec& spec,
                                           std::size_t multiplier);

} // namespace serial

// Produces window i of a set on demand, so callers can stream windows out of a
// larger series instead of materializing them.
using WindowSource = std::function<SeriesWindow(std::size_t)>;

// Copy `copy` (>= 1) of window `index` out of `count` windows, exactly as
// augment_batch produces it.
AugmentedWindow augment_copy(const WindowSource& source, std::size_t count, std::size_t index, std::size_t copy,
                             const AugmentSpec& spec);
AugmentedWindow augment_copy(std::span<const SeriesWindow> windows, std::size_t index, std::size_t copy,
                             const AugmentSpec& spec);

// Flat-array entry point for foreign callers. `data` holds `batch` windows of
// shape (lookback + horizon) x variates, row-major and contiguous. The result
// has shape (batch * multiplier, lookback + horizon, variates) in the same
// order as augment_batch.
struct BatchDescriptor {
	std::span<const double> data;
	std::size_t batch = 0;
	std::size_t lookback = 0;
	std::size_t horizon = 0;
	std::size_t variates = 0;
	AugmentSpec spec;
	std::size_t multiplier = 2;
};

std::vector<double> augment_array(const BatchDescriptor& descriptor);

} // namespace dshuffle::augment
