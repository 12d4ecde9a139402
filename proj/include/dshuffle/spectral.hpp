#pragma once

#include "dshuffle/fft.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dshuffle::spectral {

// Half spectrum of a real series of length N: the floor(N/2)+1 coefficients
// X_0 .. X_{N/2}. The original length is kept so odd and even N invert
// unambiguously.
class HalfSpectrum {
public:
	HalfSpectrum() = default;

	// Throws SizeError unless coefficients.size() == original_length/2 + 1
	// and original_length >= 2.
	HalfSpectrum(std::vector<Complex> coefficients, std::size_t original_length);

	std::size_t original_length() const noexcept { return original_length_; }
	std::size_t size() const noexcept { return coefficients_.size(); }

	// Index of the Nyquist bin when N is even.
	bool has_nyquist() const noexcept { return original_length_ % 2 == 0; }
	std::size_t nyquist_index() const noexcept { return original_length_ / 2; }

	std::span<const Complex> coefficients() const noexcept { return coefficients_; }
	std::span<Complex> coefficients() noexcept { return coefficients_; }

	const Complex& operator[](std::size_t k) const { return coefficients_[k]; }
	Complex& operator[](std::size_t k) { return coefficients_[k]; }

	friend bool operator==(const HalfSpectrum&, const HalfSpectrum&) = default;

private:
	std::vector<Complex> coefficients_;
	std::size_t original_length_ = 0;
};

// Which bins may be selected as dominant/perturbed. DC and (even-N) Nyquist
// are excluded by default: their coefficients must stay real.
struct CandidatePolicy {
	bool include_dc = false;
	bool include_nyquist = false;

	friend bool operator==(const CandidatePolicy&, const CandidatePolicy&) = default;
};

// Distinct bin indices ordered by descending source magnitude, ties by
// ascending index. `clamped` is set when fewer than the requested k bins
// were available.
struct BinIndexSet {
	std::vector<std::size_t> indices;
	bool clamped = false;

	std::size_t size() const noexcept { return indices.size(); }
	bool empty() const noexcept { return indices.empty(); }
};

// Unnormalized forward transform of a real series.
// Throws SizeError for N < 2 and InvalidInputError for non-finite samples.
HalfSpectrum rfft(std::span<const double> series);

// Inverse of rfft, scaled by 1/N. The imaginary parts of DC and (even-N)
// Nyquist are ignored.
std::vector<double> irfft(const HalfSpectrum& spectrum);

std::vector<double> magnitudes(const HalfSpectrum& spectrum);

// Candidate bins in ascending order.
std::vector<std::size_t> candidate_bins(const HalfSpectrum& spectrum, CandidatePolicy policy = {});

// The k candidate bins of largest magnitude. Throws ParameterError for k == 0
// or an empty candidate set.
BinIndexSet top_k_bins(const HalfSpectrum& spectrum, std::size_t k, CandidatePolicy policy = {});

// Sum of squares of the series reconstructed from the spectrum, computed in
// the frequency domain (Parseval).
double parseval_energy(const HalfSpectrum& spectrum);

} // namespace dshuffle::spectral
