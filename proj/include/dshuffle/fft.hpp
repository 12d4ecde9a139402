#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dshuffle::spectral {

using Complex = std::complex<double>;

// Forward complex DFT of one fixed length, unnormalized:
//   X[k] = sum_n x[n] exp(-2 pi i k n / size).
// Lengths whose prime factors are all small use an iterative mixed-radix
// Stockham transform (dedicated radix 2 to 5 kernels, generic ones otherwise),
// which keeps the output in natural order without a bit-reversal pass.
// Lengths with a large prime factor go through Bluestein's chirp-z
// reformulation on a padded 2^a or 3 * 2^a grid.
// A plan is immutable once built and may be shared between threads.
class FftPlan {
public:
	explicit FftPlan(std::size_t size);

	std::size_t size() const noexcept { return size_; }
	bool uses_bluestein() const noexcept { return inner_ != nullptr; }

	// Transforms `in` into `out`; both must have size() elements and must not
	// alias.
	void forward(std::span<const Complex> in, std::span<Complex> out) const;

	// In-place convenience wrapper.
	void forward(std::span<Complex> data) const;

private:
	// One pass combining `radix` interleaved transforms of length `length`
	// into transforms of length radix * length; `count` = size / (radix * length)
	// such groups are processed side by side.
	struct Stage {
		std::size_t radix;
		std::size_t length;
		std::size_t count;
		std::vector<Complex> twiddles; // exp(-2 pi i q j / (radix length)) at (q - 1) + (radix - 1) j
		std::vector<Complex> roots;    // exp(-2 pi i e / radix), generic radices only
	};

	void pass(const Stage& stage, const Complex* in, Complex* out) const;
	void bluestein(std::span<const Complex> in, std::span<Complex> out) const;

	std::size_t size_;
	std::vector<Stage> stages_;

	// Bluestein state
	std::shared_ptr<const FftPlan> inner_;
	std::vector<Complex> chirp_;
	std::vector<Complex> chirp_filter_spectrum_;
};

// Real-input transform of one fixed even length n, computed through a complex
// transform of length n/2 on the packed sequence x[2j] + i x[2j+1].
class RealFftPlan {
public:
	explicit RealFftPlan(std::size_t size);

	std::size_t size() const noexcept { return size_; }

	// Bins 0..n/2 of the unnormalized forward transform of `in` (n samples).
	void forward(std::span<const double> in, std::span<Complex> out) const;

	// n samples whose forward transform is `in` (n/2 + 1 bins); the imaginary
	// parts of DC and Nyquist are ignored.
	void inverse(std::span<const Complex> in, std::span<double> out) const;

private:
	std::size_t size_;
	std::shared_ptr<const FftPlan> half_;
	std::vector<Complex> rotation_; // exp(-2 pi i k / n), k < n/2
};

// Shared, lazily built plan for a length. Thread-safe. The most recently used
// plans are cached; callers may keep the returned pointer as long as needed.
std::shared_ptr<const FftPlan> plan_for(std::size_t size);

// Same caching for real plans; size must be even.
std::shared_ptr<const RealFftPlan> real_plan_for(std::size_t size);

} // namespace dshuffle::spectral
