#include "dshuffle/augment.hpp"

#include "dshuffle/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace dshuffle::augment {

using spectral::BinIndexSet;
using spectral::Complex;
using spectral::HalfSpectrum;

void validate(const SeriesWindow& window) {
	if (window.history.rows() == 0 || window.future.rows() == 0 || window.history.cols() == 0) {
		throw SizeError("window: history, future and variate counts must all be positive");
	}
	if (window.history.cols() != window.future.cols()) {
		throw SizeError("window: history and future have different variate counts");
	}
	if (!window.history.all_finite() || !window.future.all_finite()) {
		throw InvalidInputError("window: non-finite entry");
	}
}

Matrix concatenate(const SeriesWindow& window) {
	return vstack(window.history, window.future);
}

SeriesWindow split_concatenated(const Matrix& joined, std::size_t lookback) {
	if (lookback == 0 || lookback >= joined.rows()) {
		throw SizeError("split: lookback must leave at least one row on each side");
	}
	const auto data = joined.data();
	const std::size_t cut = lookback * joined.cols();
	return {Matrix(lookback, joined.cols(), std::vector<double>(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(cut))),
	        Matrix(joined.rows() - lookback, joined.cols(),
	               std::vector<double>(data.begin() + static_cast<std::ptrdiff_t>(cut), data.end()))};
}

std::string_view to_string(Method method) {
	switch (method) {
	case Method::DominantShuffle: return "dominant_shuffle";
	case Method::FreqMask: return "freq_mask";
	case Method::FreqMix: return "freq_mix";
	case Method::FreqAdd: return "freq_add";
	case Method::FreqPool: return "freq_pool";
	case Method::FreqNoise: return "freq_noise";
	case Method::FreqRandom: return "freq_random";
	case Method::Upsample: return "upsample";
	}
	return "unknown";
}

std::string_view to_string(Band band) {
	switch (band) {
	case Band::Full: return "full";
	case Band::Dominant: return "dominant";
	case Band::Minor: return "minor";
	}
	return "unknown";
}

Method parse_method(std::string_view name) {
	struct Alias {
		std::string_view name;
		Method method;
	};
	static constexpr Alias aliases[] = {
	    {"dominant_shuffle", Method::DominantShuffle}, {"shuffle", Method::DominantShuffle},
	    {"freq_mask", Method::FreqMask},               {"mask", Method::FreqMask},
	    {"freq_mix", Method::FreqMix},                 {"mix", Method::FreqMix},
	    {"freq_add", Method::FreqAdd},                 {"add", Method::FreqAdd},
	    {"freq_pool", Method::FreqPool},               {"pool", Method::FreqPool},
	    {"freq_noise", Method::FreqNoise},             {"noise", Method::FreqNoise},
	    {"robusttad", Method::FreqNoise},              {"freq_random", Method::FreqRandom},
	    {"random", Method::FreqRandom},                {"upsample", Method::Upsample},
	};
	for (const auto& alias : aliases) {
		if (alias.name == name) {
			return alias.method;
		}
	}
	throw ParameterError("unknown augmentation method '" + std::string(name) + "'");
}

Band parse_band(std::string_view name) {
	if (name == "full") return Band::Full;
	if (name == "dominant") return Band::Dominant;
	if (name == "minor") return Band::Minor;
	throw ParameterError("unknown band '" + std::string(name) + "'");
}

Band default_band(Method method) noexcept {
	switch (method) {
	case Method::DominantShuffle:
	case Method::FreqRandom: return Band::Dominant;
	default: return Band::Full;
	}
}

Band AugmentSpec::effective_band() const noexcept {
	return band.value_or(default_band(method));
}

void AugmentSpec::validate() const {
	if (k == 0) {
		throw ParameterError("k must be at least 1");
	}
	if (!(mask_rate > 0.0 && mask_rate < 1.0)) {
		throw ParameterError("mask_rate must lie in (0, 1)");
	}
	if (!(sigma > 0.0) || !std::isfinite(sigma)) {
		throw ParameterError("sigma must be positive and finite");
	}
	if (pool_size == 0) {
		throw ParameterError("pool_size must be at least 1");
	}
	if (upsample_factor < 2) {
		throw ParameterError("upsample_factor must be at least 2");
	}
}

BinIndexSet band_select(const HalfSpectrum& spectrum, Band band, std::size_t k, spectral::CandidatePolicy policy,
                        std::size_t minor_exclude) {
	switch (band) {
	case Band::Full: {
		BinIndexSet all{spectral::candidate_bins(spectrum, policy), false};
		if (all.empty()) {
			throw ParameterError("band_select: candidate set is empty");
		}
		return all;
	}
	case Band::Dominant:
		return spectral::top_k_bins(spectrum, k, policy);
	case Band::Minor: {
		std::vector<std::size_t> candidates = spectral::candidate_bins(spectrum, policy);
		if (candidates.size() <= minor_exclude) {
			throw ParameterError("band_select: minor band is empty (" + std::to_string(candidates.size()) +
			                     " candidate bins, " + std::to_string(minor_exclude) + " dominant)");
		}
		std::vector<std::size_t> dominant = spectral::top_k_bins(spectrum, minor_exclude, policy).indices;
		std::sort(dominant.begin(), dominant.end());
		BinIndexSet minor;
		std::set_difference(candidates.begin(), candidates.end(), dominant.begin(), dominant.end(),
		                    std::back_inserter(minor.indices));
		return minor;
	}
	}
	throw ParameterError("band_select: unknown band");
}

namespace {

// Per-variate spectra of [x; y].
std::vector<HalfSpectrum> forward_all(const SeriesWindow& window) {
	validate(window);
	const Matrix joined = concatenate(window);
	std::vector<HalfSpectrum> spectra;
	spectra.reserve(joined.cols());
	for (std::size_t d = 0; d < joined.cols(); ++d) {
		spectra.push_back(spectral::rfft(joined.column(d)));
	}
	return spectra;
}

AugmentedWindow inverse_all(const std::vector<HalfSpectrum>& spectra, std::size_t lookback, Method method,
                            std::uint64_t seed) {
	const std::size_t n = spectra.front().original_length();
	Matrix joined(n, spectra.size());
	for (std::size_t d = 0; d < spectra.size(); ++d) {
		const std::vector<double> series = spectral::irfft(spectra[d]);
		for (std::size_t t = 0; t < n; ++t) {
			joined(t, d) = series[t];
		}
	}
	SeriesWindow out = split_concatenated(joined, lookback);
	return {{std::move(out.history), std::move(out.future)}, Provenance{0, std::nullopt, method, seed}};
}

BinIndexSet select(const HalfSpectrum& spectrum, const AugmentSpec& spec) {
	return band_select(spectrum, spec.effective_band(), spec.k, spec.candidates, spec.minor_exclude);
}

// Uniform permutation of 0..n-1.
std::vector<std::size_t> draw_permutation(std::size_t n, Rng& rng) {
	std::vector<std::size_t> perm(n);
	std::iota(perm.begin(), perm.end(), std::size_t{0});
	std::shuffle(perm.begin(), perm.end(), rng);
	return perm;
}

// `count` distinct entries of `pool` drawn uniformly (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t count, Rng& rng) {
	count = std::min(count, pool.size());
	for (std::size_t i = 0; i < count; ++i) {
		std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
		std::swap(pool[i], pool[pick(rng)]);
	}
	pool.resize(count);
	return pool;
}

std::size_t mask_count(double rate, std::size_t band_size) {
	// the small offset absorbs products like 0.3 * 10 = 3.0000000000000004
	const auto wanted = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(band_size) - 1e-9));
	return std::clamp<std::size_t>(wanted, 1, band_size);
}

// Magnitude replacement that keeps the bin's phase; a zero bin gets phase 0.
Complex with_magnitude(const Complex& c, double magnitude) {
	if (c == Complex{}) {
		return {magnitude, 0.0};
	}
	return std::polar(magnitude, std::arg(c));
}

} // namespace

void shuffle_spectra(std::vector<HalfSpectrum>& spectra, const AugmentSpec& spec, Rng& rng) {
	spec.validate();
	std::vector<BinIndexSet> selections;
	selections.reserve(spectra.size());
	for (const auto& s : spectra) {
		selections.push_back(select(s, spec));
	}

	bool shared = !spec.per_variate_independent && !selections.empty();
	if (shared) {
		for (const auto& sel : selections) {
			shared = shared && sel.size() == selections.front().size();
		}
	}
	std::vector<std::size_t> shared_perm;
	if (shared) {
		shared_perm = draw_permutation(selections.front().size(), rng);
	}

	for (std::size_t d = 0; d < spectra.size(); ++d) {
		const auto& bins = selections[d].indices;
		const std::vector<std::size_t> perm = shared ? shared_perm : draw_permutation(bins.size(), rng);
		const HalfSpectrum original = spectra[d];
		for (std::size_t j = 0; j < bins.size(); ++j) {
			spectra[d][bins[j]] = original[bins[perm[j]]];
		}
	}
}

AugmentedWindow dominant_shuffle(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng) {
	spec.validate();
	std::vector<HalfSpectrum> spectra = forward_all(window);
	shuffle_spectra(spectra, spec, rng);
	return inverse_all(spectra, window.lookback(), spec.method, spec.seed);
}

AugmentedWindow freq_mask(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng) {
	spec.validate();
	std::vector<HalfSpectrum> spectra = forward_all(window);
	for (auto& s : spectra) {
		const BinIndexSet band = select(s, spec);
		for (std::size_t bin : sample_without_replacement(band.indices, mask_count(spec.mask_rate, band.size()), rng)) {
			s[bin] = Complex{};
		}
	}
	return inverse_all(spectra, window.lookback(), spec.method, spec.seed);
}

AugmentedWindow freq_mix(const SeriesWindow& window, const SeriesWindow& donor, const AugmentSpec& spec, Rng& rng) {
	spec.validate();
	if (window.lookback() != donor.lookback() || window.horizon() != donor.horizon() ||
	    window.variates() != donor.variates()) {
		throw SizeError("freq_mix: windows have different shapes");
	}
	std::vector<HalfSpectrum> spectra = forward_all(window);
	const std::vector<HalfSpectrum> donor_spectra = forward_all(donor);
	for (std::size_t d = 0; d < spectra.size(); ++d) {
		const BinIndexSet band = select(spectra[d], spec);
		for (std::size_t bin : sample_without_replacement(band.indices, mask_count(spec.mask_rate, band.size()), rng)) {
			spectra[d][bin] = donor_spectra[d][bin];
		}
	}
	return inverse_all(spectra, window.lookback(), spec.method, spec.seed);
}

AugmentedWindow freq_add(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng) {
	spec.validate();
	std::vector<HalfSpectrum> spectra = forward_all(window);
	const std::size_t m = spectra.front().size();
	if (m < 3) {
		throw SizeError("freq_add: needs at least 3 spectral bins");
	}
	std::uniform_int_distribution<std::size_t> low_bin(1, (m - 1) / 2);
	for (auto& s : spectra) {
		const std::vector<double> mags = spectral::magnitudes(s);
		double peak = 0.0;
		for (std::size_t bin : spectral::candidate_bins(s, spec.candidates)) {
			peak = std::max(peak, mags[bin]);
		}
		const std::size_t bin = low_bin(rng);
		s[bin] = with_magnitude(s[bin], 0.5 * peak);
	}
	return inverse_all(spectra, window.lookback(), spec.method, spec.seed);
}

AugmentedWindow freq_pool(const SeriesWindow& window, const AugmentSpec& spec) {
	spec.validate();
	std::vector<HalfSpectrum> spectra = forward_all(window);
	for (auto& s : spectra) {
		const std::vector<double> mags = spectral::magnitudes(s);
		for (std::size_t start = 0; start < s.size(); start += spec.pool_size) {
			const std::size_t stop = std::min(s.size(), start + spec.pool_size);
			const double peak = *std::max_element(mags.begin() + static_cast<std::ptrdiff_t>(start),
			                                      mags.begin() + static_cast<std::ptrdiff_t>(stop));
			for (std::size_t bin = start; bin < stop; ++bin) {
				if (mags[bin] != peak) {
					s[bin] = with_magnitude(s[bin], peak);
				}
			}
		}
	}
	return inverse_all(spectra, window.lookback(), spec.method, spec.seed);
}

AugmentedWindow freq_noise(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng) {
	spec.validate();
	// DC and Nyquist must stay real, so they are never perturbed here.
	AugmentSpec real_safe = spec;
	real_safe.candidates = {};
	std::vector<HalfSpectrum> spectra = forward_all(window);
	for (auto& s : spectra) {
		const BinIndexSet band = select(s, real_safe);
		double scale = spec.sigma;
		if (spec.noise_scale == NoiseScale::RelativeToMeanMagnitude) {
			const std::vector<double> mags = spectral::magnitudes(s);
			const std::vector<std::size_t> candidates = spectral::candidate_bins(s);
			double total = 0.0;
			for (std::size_t bin : candidates) {
				total += mags[bin];
			}
			scale *= total / static_cast<double>(candidates.size());
		}
		if (scale == 0.0) {
			continue;
		}
		std::normal_distribution<double> noise(0.0, scale);
		for (std::size_t bin : band.indices) {
			const double re = noise(rng);
			const double im = noise(rng);
			s[bin] += Complex(re, im);
		}
	}
	return inverse_all(spectra, window.lookback(), spec.method, spec.seed);
}

AugmentedWindow freq_random(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng) {
	spec.validate();
	std::vector<HalfSpectrum> spectra = forward_all(window);
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	for (auto& s : spectra) {
		const BinIndexSet band = select(s, spec);
		const std::vector<double> mags = spectral::magnitudes(s);
		double lo = mags[band.indices.front()];
		double hi = lo;
		for (std::size_t bin : band.indices) {
			lo = std::min(lo, mags[bin]);
			hi = std::max(hi, mags[bin]);
		}
		for (std::size_t bin : band.indices) {
			const double drawn = std::clamp(lo + (hi - lo) * unit(rng), lo, hi);
			if (drawn != mags[bin]) {
				s[bin] = with_magnitude(s[bin], drawn);
			}
		}
	}
	return inverse_all(spectra, window.lookback(), spec.method, spec.seed);
}

AugmentedWindow upsample_aug(const SeriesWindow& window, const AugmentSpec& spec, Rng& rng) {
	spec.validate();
	validate(window);
	const Matrix joined = concatenate(window);
	const std::size_t n = joined.rows();
	const std::size_t f = spec.upsample_factor;
	// fine grid p_j = j / f for j = 0 .. f (n - 1)
	const std::size_t grid = f * (n - 1) + 1;
	std::uniform_int_distribution<std::size_t> offset_dist(0, grid - n);
	const std::size_t offset = offset_dist(rng);

	Matrix out(n, joined.cols());
	for (std::size_t j = 0; j < n; ++j) {
		const std::size_t q = offset + j;
		const std::size_t base = q / f;
		const std::size_t rem = q % f;
		for (std::size_t d = 0; d < joined.cols(); ++d) {
			if (rem == 0) {
				out(j, d) = joined(base, d);
			} else {
				const double frac = static_cast<double>(rem) / static_cast<double>(f);
				out(j, d) = (1.0 - frac) * joined(base, d) + frac * joined(base + 1, d);
			}
		}
	}
	SeriesWindow split = split_concatenated(out, window.lookback());
	return {{std::move(split.history), std::move(split.future)}, Provenance{0, std::nullopt, spec.method, spec.seed}};
}

AugmentedWindow apply(const SeriesWindow& window, const SeriesWindow* donor, const AugmentSpec& spec, Rng& rng) {
	switch (spec.method) {
	case Method::DominantShuffle: return dominant_shuffle(window, spec, rng);
	case Method::FreqMask: return freq_mask(window, spec, rng);
	case Method::FreqMix:
		if (donor == nullptr) {
			throw ParameterError("freq_mix requires a donor window");
		}
		return freq_mix(window, *donor, spec, rng);
	case Method::FreqAdd: return freq_add(window, spec, rng);
	case Method::FreqPool: return freq_pool(window, spec);
	case Method::FreqNoise: return freq_noise(window, spec, rng);
	case Method::FreqRandom: return freq_random(window, spec, rng);
	case Method::Upsample: return upsample_aug(window, spec, rng);
	}
	throw ParameterError("unknown augmentation method");
}

} // namespace dshuffle::augment
