#pragma once

// Frequency-domain augmentation operators for (history, future) windows.
//
// Every operator works on the time-concatenation [x; y] of a window, one
// variate at a time: transform the N = L + T samples with rfft, perturb the
// half spectrum, invert, and split the result back into L history rows and T
// future rows. Randomness comes only from the Rng passed in, so an operator is
// a pure function of (window, spec, rng state).

#include "dshuffle/matrix.hpp"
#include "dshuffle/rng.hpp"
#include "dshuffle/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dshuffle::augment {

// One training pair: history x (L x D) and future y (T x D).
struct SeriesWindow {
	Matrix history;
	Matrix future;

	std::size_t lookback() const noexcept { return history.rows(); }
	std::size_t horizon() const noexcept { return future.rows(); }
	std::size_t variates() const noexcept { return history.cols(); }
	std::size_t length() const noexcept { return history.rows() + future.rows(); }

	friend bool operator==(const SeriesWindow&, const SeriesWindow&) = default;
};

// Throws SizeError for empty or inconsistent shapes and InvalidInputError for
// non-finite entries.
void validate(const SeriesWindow& window);

// [x; y] as an N x D matrix.
Matrix concatenate(const SeriesWindow& window);

// Inverse of concatenate for a given lookback.
SeriesWindow split_concatenated(const Matrix& joined, std::size_t lookback);

enum class Method { DominantShuffle, FreqMask, FreqMix, FreqAdd, FreqPool, FreqNoise, FreqRandom, Upsample };

// Spectral subset an operator perturbs.
enum class Band { Full, Dominant, Minor };

enum class NoiseScale {
	RelativeToMeanMagnitude, // std = sigma * mean candidate magnitude
	Absolute                 // std = sigma
};

std::string_view to_string(Method method);
std::string_view to_string(Band band);
// Accepts the to_string spellings plus short aliases ("shuffle", "mask", ...).
// Throws ParameterError on unknown names.
Method parse_method(std::string_view name);
Band parse_band(std::string_view name);

struct AugmentSpec {
	Method method = Method::DominantShuffle;
	// dominant set size for Band::Dominant
	std::size_t k = 4;
	// unset: the method's default band (see default_band)
	std::optional<Band> band;
	// Band::Minor is the candidate set minus this many dominant bins
	std::size_t minor_exclude = 10;
	double mask_rate = 0.1;
	double sigma = 0.1;
	NoiseScale noise_scale = NoiseScale::RelativeToMeanMagnitude;
	std::size_t pool_size = 4;
	std::size_t upsample_factor = 2;
	bool per_variate_independent = true;
	spectral::CandidatePolicy candidates;
	std::uint64_t seed = 0;

	Band effective_band() const noexcept;

	// Throws ParameterError when a parameter is out of range.
	void validate() const;

	friend bool operator==(const AugmentSpec&, const AugmentSpec&) = default;
};

Band default_band(Method method) noexcept;

struct Provenance {
	std::size_t source = 0;
	std::optional<std::size_t> partner; // FreqMix donor window
	std::optional<Method> method;       // unset for pass-through originals
	std::uint64_t seed = 0;

	friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct AugmentedWindow : SeriesWindow {
	Provenance provenance;

	friend bool operator==(const AugmentedWindow&, const AugmentedWindow&) = default;
};

// Bins an operator may touch for a band:
//   Full     -> every candidate bin, ascending
//   Dominant -> top_k_bins(spectrum, k)
//   Minor    -> candidates minus top_k_bins(spectrum, minor_exclude), ascending
// Throws ParameterError when Minor would be empty.
spectral::BinIndexSet band_select(const spectral::HalfSpectrum& spectrum, Band band, std::size_t k,
                                  spectral::CandidatePolicy policy = {}, std::size_t minor_exclude = 10);

// Permutes the complex coefficients at the selected bins (the dominant set by
// default) with a uniformly drawn permutation; every other bin is untouched.
AugmentedWindow dominant_shuffle(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng);

// Spectral core of dominant_shuffle: permutes each spectrum's selected bins in
// place, consuming the rng exactly as dominant_shuffle does.
void shuffle_spectra(std::vector<spectral::HalfSpectrum>& spectra, const AugmentSpec& spec, Rng& rng);

// Zeroes ceil(mask_rate * |band|) bins drawn without replacement.
AugmentedWindow freq_mask(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng);

// Like freq_mask, but the chosen bins of `window` receive `donor`'s
// coefficients instead of zeros.
AugmentedWindow freq_mix(const SeriesWindow& window, const SeriesWindow& donor, const AugmentSpec& spec, Rng& rng);

// Sets one low-frequency bin to half of the largest candidate magnitude,
// keeping its phase.
AugmentedWindow freq_add(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng);

// Max-pools magnitudes over consecutive groups of pool_size bins starting at
// DC; phases are kept. Deterministic.
AugmentedWindow freq_pool(const SeriesWindow& window, const AugmentSpec& spec);

// Adds Gaussian noise to the real and imaginary parts of the band's bins.
AugmentedWindow freq_noise(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng);

// Redraws each band magnitude uniformly within the band's [min, max],
// keeping phases.
AugmentedWindow freq_random(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng);

// Linear interpolation to upsample_factor times the resolution followed by a
// random contiguous crop of the original length.
AugmentedWindow upsample_aug(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng);

// Dispatches on spec.method. `donor` is required for FreqMix and ignored
// otherwise.
AugmentedWindow apply(const SeriesWindow& window, const SeriesWindow* donor, const AugmentSpec& spec, Rng& rng);

} // namespace dshuffle::augment
