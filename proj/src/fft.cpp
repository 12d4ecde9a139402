#include "dshuffle/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <list>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace dshuffle::spectral {

namespace {

// Factors above this are handled by Bluestein instead of an O(p^2) butterfly;
// past this point the padded Bluestein transforms are cheaper.
constexpr std::size_t kMaxGenericRadix = 23;

// Plans kept by plan_for; least recently used ones are dropped beyond this.
constexpr std::size_t kPlanCacheCapacity = 64;

// Plain complex product; std::complex's operator* adds an inf/nan recovery
// branch that costs more than the arithmetic here.
inline Complex mul(const Complex& a, const Complex& b) {
	return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// exp(-2 pi i num / den) with the argument reduced exactly in integers first.
Complex unit_root(std::uint64_t num, std::uint64_t den) {
	num %= den;
	const double angle = -2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
	return {std::cos(angle), std::sin(angle)};
}

// exp(-2 pi i num / den) for many num: w^(a B + b) = w^(a B) w^b from two
// tables of about sqrt(den) entries, trading sin/cos calls for one complex
// product (a few ulps of extra error).
class RootTable {
public:
	explicit RootTable(std::uint64_t den)
	    : den_(den), block_(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(den)))))) {
		for (std::uint64_t b = 0; b < block_; ++b) {
			fine_.push_back(unit_root(b, den_));
		}
		for (std::uint64_t a = 0; a * block_ < den_; ++a) {
			coarse_.push_back(unit_root(a * block_, den_));
		}
	}

	Complex operator()(std::uint64_t num) const {
		num %= den_;
		return mul(coarse_[num / block_], fine_[num % block_]);
	}

private:
	std::uint64_t den_;
	std::uint64_t block_;
	std::vector<Complex> fine_;
	std::vector<Complex> coarse_;
};

// Per-thread buffer of at least n elements, reused across calls.
Complex* workspace(std::vector<Complex>& buffer, std::size_t n) {
	if (buffer.size() < n) {
		buffer.resize(n);
	}
	return buffer.data();
}

// Radix kernels for groups [j_begin, j_end) of one Stockham pass. Group j
// reads x[k + q m] (q < radix, k < m) from x = in + j m radix, scales input q
// by w[q - 1] with w = tw + (radix - 1) j (skipped for the twiddle-free first
// group) and writes output j2 to y[k + j2 * out_stride] with y = out + j m.
template <bool Twiddle>
void radix2(const Complex* in, Complex* out, std::size_t m, std::size_t out_stride, const Complex* tw, std::size_t j_begin,
           std::size_t j_end) {
	for (std::size_t j = j_begin; j < j_end; ++j) {
		const Complex* x = in + j * m * 2;
		Complex* y = out + j * m;
		const Complex* w = tw + 1 * j;
		for (std::size_t k = 0; k < m; ++k) {
			const Complex b0 = x[k];
			const Complex b1 = Twiddle ? mul(x[k + m], w[0]) : x[k + m];
			y[k] = b0 + b1;
			y[k + out_stride] = b0 - b1;
		}
	}
}

template <bool Twiddle>
void radix3(const Complex* in, Complex* out, std::size_t m, std::size_t out_stride, const Complex* tw, std::size_t j_begin,
           std::size_t j_end) {
	// X1, X2 = b0 - (b1 + b2) / 2 -/+ i (sqrt(3)/2) (b1 - b2)
	const double half_sqrt3 = -0.5 * std::numbers::sqrt3;
	for (std::size_t j = j_begin; j < j_end; ++j) {
		const Complex* x = in + j * m * 3;
		Complex* y = out + j * m;
		const Complex* w = tw + 2 * j;
		for (std::size_t k = 0; k < m; ++k) {
			const Complex b0 = x[k];
			const Complex b1 = Twiddle ? mul(x[k + m], w[0]) : x[k + m];
			const Complex b2 = Twiddle ? mul(x[k + 2 * m], w[1]) : x[k + 2 * m];
			const Complex sum = b1 + b2;
			const Complex d = (b1 - b2) * half_sqrt3;
			const Complex mid = b0 - 0.5 * sum;
			y[k] = b0 + sum;
			y[k + out_stride] = Complex(mid.real() - d.imag(), mid.imag() + d.real());
			y[k + 2 * out_stride] = Complex(mid.real() + d.imag(), mid.imag() - d.real());
		}
	}
}

template <bool Twiddle>
void radix4(const Complex* in, Complex* out, std::size_t m, std::size_t out_stride, const Complex* tw, std::size_t j_begin,
           std::size_t j_end) {
	for (std::size_t j = j_begin; j < j_end; ++j) {
		const Complex* x = in + j * m * 4;
		Complex* y = out + j * m;
		const Complex* w = tw + 3 * j;
		for (std::size_t k = 0; k < m; ++k) {
			const Complex b0 = x[k];
			const Complex b1 = Twiddle ? mul(x[k + m], w[0]) : x[k + m];
			const Complex b2 = Twiddle ? mul(x[k + 2 * m], w[1]) : x[k + 2 * m];
			const Complex b3 = Twiddle ? mul(x[k + 3 * m], w[2]) : x[k + 3 * m];
			const Complex t0 = b0 + b2;
			const Complex t1 = b0 - b2;
			const Complex t2 = b1 + b3;
			const Complex t3 = b1 - b3;
			y[k] = t0 + t2;
			y[k + 2 * out_stride] = t0 - t2;
			// t1 -/+ i t3
			y[k + out_stride] = Complex(t1.real() + t3.imag(), t1.imag() - t3.real());
			y[k + 3 * out_stride] = Complex(t1.real() - t3.imag(), t1.imag() + t3.real());
		}
	}
}

template <bool Twiddle>
void radix5(const Complex* in, Complex* out, std::size_t m, std::size_t out_stride, const Complex* tw, std::size_t j_begin,
           std::size_t j_end) {
	// ya = exp(-2 pi i / 5), yb = exp(-4 pi i / 5)
	static const Complex ya = unit_root(1, 5);
	static const Complex yb = unit_root(2, 5);
	for (std::size_t j = j_begin; j < j_end; ++j) {
		const Complex* x = in + j * m * 5;
		Complex* y = out + j * m;
		const Complex* w = tw + 4 * j;
		for (std::size_t k = 0; k < m; ++k) {
			const Complex s0 = x[k];
			const Complex s1 = Twiddle ? mul(x[k + m], w[0]) : x[k + m];
			const Complex s2 = Twiddle ? mul(x[k + 2 * m], w[1]) : x[k + 2 * m];
			const Complex s3 = Twiddle ? mul(x[k + 3 * m], w[2]) : x[k + 3 * m];
			const Complex s4 = Twiddle ? mul(x[k + 4 * m], w[3]) : x[k + 4 * m];
			const Complex s7 = s1 + s4;
			const Complex s10 = s1 - s4;
			const Complex s8 = s2 + s3;
			const Complex s9 = s2 - s3;
			y[k] = s0 + s7 + s8;
			const Complex s5 = s0 + s7 * ya.real() + s8 * yb.real();
			const Complex s6(s10.imag() * ya.imag() + s9.imag() * yb.imag(), -s10.real() * ya.imag() - s9.real() * yb.imag());
			y[k + out_stride] = s5 - s6;
			y[k + 4 * out_stride] = s5 + s6;
			const Complex s11 = s0 + s7 * yb.real() + s8 * ya.real();
			const Complex s12(-s10.imag() * yb.imag() + s9.imag() * ya.imag(), s10.real() * yb.imag() - s9.real() * ya.imag());
			y[k + 2 * out_stride] = s11 + s12;
			y[k + 3 * out_stride] = s11 - s12;
		}
	}
}

void radix_generic(const Complex* x, Complex* y, std::size_t m, std::size_t out_stride, const Complex* w,
                   std::size_t radix, const Complex* roots) {
	Complex scratch[kMaxGenericRadix];
	for (std::size_t k = 0; k < m; ++k) {
		scratch[0] = x[k];
		for (std::size_t q = 1; q < radix; ++q) {
			scratch[q] = mul(x[k + q * m], w[q - 1]);
		}
		for (std::size_t j2 = 0; j2 < radix; ++j2) {
			// q * j2 reduced mod radix by one subtraction per step
			std::size_t e = 0;
			Complex acc = scratch[0];
			for (std::size_t q = 1; q < radix; ++q) {
				e += j2;
				if (e >= radix) {
					e -= radix;
				}
				acc += mul(scratch[q], roots[e]);
			}
			y[k + j2 * out_stride] = acc;
		}
	}
}

} // namespace

FftPlan::FftPlan(std::size_t size) : size_(size) {
	if (size == 0) {
		throw std::invalid_argument("FftPlan: size must be positive");
	}

	// radix 4 first, then 2, then odd primes
	std::vector<std::size_t> radices;
	std::size_t rest = size;
	std::size_t p = 4;
	bool small_factors = true;
	while (rest > 1) {
		while (rest % p != 0) {
			if (p == 4) {
				p = 2;
			} else if (p == 2) {
				p = 3;
			} else {
				p += 2;
			}
			if (p * p > rest) {
				p = rest;
			}
		}
		if (p > kMaxGenericRadix) {
			small_factors = false;
			break;
		}
		rest /= p;
		radices.push_back(p);
	}

	if (small_factors) {
		const RootTable root(size_);
		std::size_t length = 1;
		for (const std::size_t radix : radices) {
			Stage stage{radix, length, size_ / (radix * length), {}, {}};
			// exp(-2 pi i q j / (radix length)) = exp(-2 pi i q j count / size)
			stage.twiddles.reserve((radix - 1) * length);
			for (std::size_t j = 0; j < length; ++j) {
				for (std::size_t q = 1; q < radix; ++q) {
					stage.twiddles.push_back(root(q * j * stage.count));
				}
			}
			if (radix > 5) {
				for (std::size_t e = 0; e < radix; ++e) {
					stage.roots.push_back(unit_root(e, radix));
				}
			}
			stages_.push_back(std::move(stage));
			length *= radix;
		}
		return;
	}

	// smallest 2^a or 3 * 2^a grid that holds the linear convolution
	const std::size_t needed = 2 * size_ - 1;
	const std::size_t pow2 = std::bit_ceil(needed);
	const std::size_t padded = pow2 / 4 * 3 >= needed ? pow2 / 4 * 3 : pow2;
	inner_ = plan_for(padded);
	// chirp[n] = exp(-pi i n^2 / size) = exp(-2 pi i n^2 / (2 size))
	const std::uint64_t period = 2 * static_cast<std::uint64_t>(size_);
	const RootTable root(period);
	chirp_.resize(size_);
	for (std::size_t n = 0; n < size_; ++n) {
		chirp_[n] = root((static_cast<std::uint64_t>(n) * n) % period);
	}
	std::vector<Complex> filter(padded, Complex{});
	filter[0] = std::conj(chirp_[0]);
	for (std::size_t n = 1; n < size_; ++n) {
		filter[n] = std::conj(chirp_[n]);
		filter[padded - n] = std::conj(chirp_[n]);
	}
	chirp_filter_spectrum_.resize(padded);
	inner_->forward(filter, chirp_filter_spectrum_);
}

void FftPlan::pass(const Stage& stage, const Complex* in, Complex* out) const {
	// output bin j + length * j2 of group k lands at (j + length j2) count + k
	const std::size_t m = stage.count;
	const std::size_t l = stage.length;
	const std::size_t out_stride = l * m;
	const Complex* w = stage.twiddles.data();
	switch (stage.radix) {
	case 2: radix2<false>(in, out, m, out_stride, w, 0, 1); radix2<true>(in, out, m, out_stride, w, 1, l); break;
	case 3: radix3<false>(in, out, m, out_stride, w, 0, 1); radix3<true>(in, out, m, out_stride, w, 1, l); break;
	case 4: radix4<false>(in, out, m, out_stride, w, 0, 1); radix4<true>(in, out, m, out_stride, w, 1, l); break;
	case 5: radix5<false>(in, out, m, out_stride, w, 0, 1); radix5<true>(in, out, m, out_stride, w, 1, l); break;
	default:
		for (std::size_t j = 0; j < l; ++j) {
			radix_generic(in + j * m * stage.radix, out + j * m, m, out_stride, w + (stage.radix - 1) * j, stage.radix,
			              stage.roots.data());
		}
		break;
	}
}

void FftPlan::bluestein(std::span<const Complex> in, std::span<Complex> out) const {
	// X[k] = c[k] * sum_n (x[n] c[n]) conj(c[k-n]) with c = chirp_
	const std::size_t padded = inner_->size();
	thread_local std::vector<Complex> a_buffer;
	thread_local std::vector<Complex> spec_buffer;
	const std::span<Complex> a(workspace(a_buffer, padded), padded);
	const std::span<Complex> spec(workspace(spec_buffer, padded), padded);
	for (std::size_t n = 0; n < size_; ++n) {
		a[n] = mul(in[n], chirp_[n]);
	}
	std::fill(a.begin() + static_cast<std::ptrdiff_t>(size_), a.end(), Complex{});
	inner_->forward(a, spec);
	// inverse via conjugation: ifft(v) = conj(fft(conj(v))) / padded
	for (std::size_t i = 0; i < padded; ++i) {
		spec[i] = std::conj(mul(spec[i], chirp_filter_spectrum_[i]));
	}
	inner_->forward(spec, a);
	const double scale = 1.0 / static_cast<double>(padded);
	for (std::size_t k = 0; k < size_; ++k) {
		out[k] = mul(std::conj(a[k]) * scale, chirp_[k]);
	}
}

void FftPlan::forward(std::span<const Complex> in, std::span<Complex> out) const {
	if (in.size() != size_ || out.size() != size_) {
		throw std::invalid_argument("FftPlan::forward: length mismatch");
	}
	if (inner_) {
		bluestein(in, out);
		return;
	}
	if (stages_.empty()) {
		out[0] = in[0];
		return;
	}
	// ping-pong between out and scratch so the last pass lands in out
	thread_local std::vector<Complex> scratch_buffer;
	Complex* scratch = workspace(scratch_buffer, size_);
	Complex* dst = stages_.size() % 2 == 1 ? out.data() : scratch;
	Complex* other = dst == out.data() ? scratch : out.data();
	const Complex* src = in.data();
	for (const Stage& stage : stages_) {
		pass(stage, src, dst);
		src = dst;
		std::swap(dst, other);
	}
}

void FftPlan::forward(std::span<Complex> data) const {
	std::vector<Complex> copy(data.begin(), data.end());
	forward(copy, data);
}

namespace {

// Small LRU cache of immutable plans keyed by length. Plans are built outside
// the lock because a Bluestein plan requests its inner plan while being built.
template <class Plan>
std::shared_ptr<const Plan> cached_plan(std::size_t size) {
	using Order = std::list<std::size_t>;
	static std::mutex mutex;
	static Order order; // front is the most recently used length
	static std::unordered_map<std::size_t, std::pair<std::shared_ptr<const Plan>, Order::iterator>> cache;
	{
		std::lock_guard lock(mutex);
		if (auto it = cache.find(size); it != cache.end()) {
			order.splice(order.begin(), order, it->second.second);
			return it->second.first;
		}
	}
	auto plan = std::make_shared<const Plan>(size);
	std::lock_guard lock(mutex);
	if (auto it = cache.find(size); it != cache.end()) {
		// another thread inserted meanwhile; both are identical, keep the first
		return it->second.first;
	}
	order.push_front(size);
	cache.emplace(size, std::pair{plan, order.begin()});
	while (cache.size() > kPlanCacheCapacity) {
		cache.erase(order.back());
		order.pop_back();
	}
	return plan;
}

} // namespace

RealFftPlan::RealFftPlan(std::size_t size) : size_(size) {
	if (size < 2 || size % 2 != 0) {
		throw std::invalid_argument("RealFftPlan: size must be even and positive");
	}
	half_ = plan_for(size / 2);
	const RootTable root(size);
	rotation_.resize(size / 2);
	for (std::size_t k = 0; k < size / 2; ++k) {
		rotation_[k] = root(k);
	}
}

void RealFftPlan::forward(std::span<const double> in, std::span<Complex> out) const {
	const std::size_t m = size_ / 2;
	if (in.size() != size_ || out.size() != m + 1) {
		throw std::invalid_argument("RealFftPlan::forward: length mismatch");
	}
	thread_local std::vector<Complex> packed_buffer;
	thread_local std::vector<Complex> z_buffer;
	const std::span<Complex> packed(workspace(packed_buffer, m), m);
	const std::span<Complex> z(workspace(z_buffer, m), m);
	for (std::size_t j = 0; j < m; ++j) {
		packed[j] = {in[2 * j], in[2 * j + 1]};
	}
	half_->forward(packed, z);
	// even-sample spectrum e = (Z[k] + conj Z[m-k]) / 2,
	// odd-sample spectrum  o = (Z[k] - conj Z[m-k]) / 2i,
	// X[k] = e + w^k o and X[m] = e[0] - o[0]
	for (std::size_t k = 0; k <= m; ++k) {
		const Complex a = z[k % m];
		const Complex b = std::conj(z[(m - k % m) % m]);
		const Complex even = 0.5 * (a + b);
		const Complex d = a - b;
		const Complex odd(0.5 * d.imag(), -0.5 * d.real());
		out[k] = k < m ? even + mul(rotation_[k], odd) : even - odd;
	}
}

void RealFftPlan::inverse(std::span<const Complex> in, std::span<double> out) const {
	const std::size_t m = size_ / 2;
	if (in.size() != m + 1 || out.size() != size_) {
		throw std::invalid_argument("RealFftPlan::inverse: length mismatch");
	}
	const auto bin = [&](std::size_t k) {
		return k == 0 || k == m ? Complex(in[k].real(), 0.0) : in[k];
	};
	// Z[k] = e + i o with e, o the even/odd-sample spectra, conjugated so the
	// forward plan computes the inverse
	thread_local std::vector<Complex> z_buffer;
	thread_local std::vector<Complex> packed_buffer;
	const std::span<Complex> z(workspace(z_buffer, m), m);
	const std::span<Complex> packed(workspace(packed_buffer, m), m);
	for (std::size_t k = 0; k < m; ++k) {
		const Complex a = bin(k);
		const Complex b = std::conj(bin(m - k));
		const Complex even = 0.5 * (a + b);
		const Complex odd = mul(0.5 * (a - b), std::conj(rotation_[k]));
		z[k] = std::conj(Complex(even.real() - odd.imag(), even.imag() + odd.real()));
	}
	half_->forward(z, packed);
	const double scale = 1.0 / static_cast<double>(m);
	for (std::size_t j = 0; j < m; ++j) {
		out[2 * j] = packed[j].real() * scale;
		out[2 * j + 1] = -packed[j].imag() * scale;
	}
}

std::shared_ptr<const FftPlan> plan_for(std::size_t size) {
	return cached_plan<FftPlan>(size);
}

std::shared_ptr<const RealFftPlan> real_plan_for(std::size_t size) {
	return cached_plan<RealFftPlan>(size);
}

} // namespace dshuffle::spectral
