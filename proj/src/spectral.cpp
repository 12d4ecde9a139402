#include "dshuffle/spectral.hpp"

#include "dshuffle/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dshuffle::spectral {

HalfSpectrum::HalfSpectrum(std::vector<Complex> coefficients, std::size_t original_length)
    : coefficients_(std::move(coefficients)), original_length_(original_length) {
	if (original_length_ < 2) {
		throw SizeError("half spectrum: original length must be at least 2");
	}
	if (coefficients_.size() != original_length_ / 2 + 1) {
		throw SizeError("half spectrum: " + std::to_string(coefficients_.size()) +
		                " coefficients do not match original length " + std::to_string(original_length_));
	}
}

HalfSpectrum rfft(std::span<const double> series) {
	const std::size_t n = series.size();
	if (n < 2) {
		throw SizeError("rfft: series length must be at least 2");
	}
	for (std::size_t i = 0; i < n; ++i) {
		if (!std::isfinite(series[i])) {
			throw InvalidInputError("rfft: non-finite sample at index " + std::to_string(i));
		}
	}
	std::vector<Complex> out;
	if (n % 2 == 0) {
		out.resize(n / 2 + 1);
		real_plan_for(n)->forward(series, out);
	} else {
		std::vector<Complex> work(series.begin(), series.end());
		out.resize(n);
		plan_for(n)->forward(work, out);
		out.resize(n / 2 + 1);
	}
	// exact real-input symmetry: DC and Nyquist are real
	out[0].imag(0.0);
	if (n % 2 == 0) {
		out[n / 2].imag(0.0);
	}
	return HalfSpectrum(std::move(out), n);
}

std::vector<double> irfft(const HalfSpectrum& spectrum) {
	const std::size_t n = spectrum.original_length();
	const std::size_t m = spectrum.size();
	if (n < 2 || m != n / 2 + 1) {
		throw SizeError("irfft: inconsistent half spectrum");
	}
	if (n % 2 == 0) {
		std::vector<double> out(n);
		real_plan_for(n)->inverse(spectrum.coefficients(), out);
		return out;
	}
	// Hermitian extension, conjugated so the forward plan yields the inverse.
	std::vector<Complex> full(n);
	full[0] = Complex(spectrum[0].real(), 0.0);
	for (std::size_t k = 1; k < m; ++k) {
		full[k] = std::conj(spectrum[k]);
		full[n - k] = spectrum[k];
	}
	if (n % 2 == 0) {
		full[n / 2] = Complex(spectrum[n / 2].real(), 0.0);
	}
	std::vector<Complex> time(n);
	plan_for(n)->forward(full, time);
	std::vector<double> out(n);
	const double scale = 1.0 / static_cast<double>(n);
	for (std::size_t i = 0; i < n; ++i) {
		out[i] = time[i].real() * scale;
	}
	return out;
}

std::vector<double> magnitudes(const HalfSpectrum& spectrum) {
	std::vector<double> out(spectrum.size());
	for (std::size_t k = 0; k < spectrum.size(); ++k) {
		out[k] = std::abs(spectrum[k]);
	}
	return out;
}

std::vector<std::size_t> candidate_bins(const HalfSpectrum& spectrum, CandidatePolicy policy) {
	std::vector<std::size_t> out;
	out.reserve(spectrum.size());
	for (std::size_t k = 0; k < spectrum.size(); ++k) {
		if (k == 0 && !policy.include_dc) {
			continue;
		}
		if (spectrum.has_nyquist() && k == spectrum.nyquist_index() && !policy.include_nyquist) {
			continue;
		}
		out.push_back(k);
	}
	return out;
}

BinIndexSet top_k_bins(const HalfSpectrum& spectrum, std::size_t k, CandidatePolicy policy) {
	if (k == 0) {
		throw ParameterError("top_k_bins: k must be at least 1");
	}
	std::vector<std::size_t> candidates = candidate_bins(spectrum, policy);
	if (candidates.empty()) {
		throw ParameterError("top_k_bins: candidate set is empty");
	}
	const std::vector<double> mags = magnitudes(spectrum);
	const auto by_magnitude = [&mags](std::size_t a, std::size_t b) {
		if (mags[a] != mags[b]) {
			return mags[a] > mags[b];
		}
		return a < b;
	};

	BinIndexSet result;
	const std::size_t take = std::min(k, candidates.size());
	result.clamped = take < k;
	std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
	                  by_magnitude);
	candidates.resize(take);
	result.indices = std::move(candidates);
	return result;
}

double parseval_energy(const HalfSpectrum& spectrum) {
	const std::size_t n = spectrum.original_length();
	double sum = std::norm(Complex(spectrum[0].real(), 0.0));
	for (std::size_t k = 1; k < spectrum.size(); ++k) {
		if (spectrum.has_nyquist() && k == spectrum.nyquist_index()) {
			sum += spectrum[k].real() * spectrum[k].real();
		} else {
			sum += 2.0 * std::norm(spectrum[k]);
		}
	}
	return sum / static_cast<double>(n);
}

} // namespace dshuffle::spectral
