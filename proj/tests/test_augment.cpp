#include <catch2/catch_amalgamated.hpp>

#include "dshuffle/augment.hpp"
#include "dshuffle/error.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <numeric>

using namespace dshuffle;
using namespace dshuffle::augment;
using spectral::Complex;
using spectral::HalfSpectrum;
using testing::max_abs_diff;
using testing::random_window;

namespace {

AugmentSpec spec_for(Method m) {
	AugmentSpec s;
	s.method = m;
	return s;
}

std::vector<HalfSpectrum> spectra_of(const SeriesWindow& w) {
	const Matrix joined = concatenate(w);
	std::vector<HalfSpectrum> out;
	for (std::size_t d = 0; d < joined.cols(); ++d) out.push_back(spectral::rfft(joined.column(d)));
	return out;
}

SeriesWindow constant_window(std::size_t l, std::size_t t, std::vector<double> levels) {
	Matrix x(l, levels.size());
	Matrix y(t, levels.size());
	for (std::size_t d = 0; d < levels.size(); ++d) {
		for (std::size_t r = 0; r < l; ++r) x(r, d) = levels[d];
		for (std::size_t r = 0; r < t; ++r) y(r, d) = levels[d];
	}
	return {x, y};
}

// Reference for dominant_shuffle built only from naive transforms, a full
// sort and std::shuffle on the same engine.
SeriesWindow shuffle_oracle(const SeriesWindow& w, std::size_t k, std::uint64_t seed) {
	Rng rng(seed);
	const Matrix joined = concatenate(w);
	const std::size_t n = joined.rows();
	std::vector<std::vector<Complex>> spectra;
	std::vector<std::vector<std::size_t>> tops;
	for (std::size_t d = 0; d < joined.cols(); ++d) {
		spectra.push_back(oracle::naive_rdft(joined.column(d)));
		tops.push_back(oracle::full_sort_top_k(spectra.back(), n, k));
	}
	Matrix out(n, joined.cols());
	for (std::size_t d = 0; d < joined.cols(); ++d) {
		std::vector<std::size_t> perm(tops[d].size());
		std::iota(perm.begin(), perm.end(), std::size_t{0});
		std::shuffle(perm.begin(), perm.end(), rng);
		std::vector<Complex> swapped = spectra[d];
		for (std::size_t j = 0; j < perm.size(); ++j) {
			swapped[tops[d][j]] = spectra[d][tops[d][perm[j]]];
		}
		const auto series = oracle::naive_irdft(swapped, n);
		for (std::size_t t = 0; t < n; ++t) out(t, d) = series[t];
	}
	return split_concatenated(out, w.lookback());
}

// Partial Fisher-Yates draw, restated independently of the library.
std::vector<std::size_t> oracle_sample(std::vector<std::size_t> pool, std::size_t count, Rng& rng) {
	for (std::size_t i = 0; i < count; ++i) {
		std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
		std::swap(pool[i], pool[pick(rng)]);
	}
	pool.resize(count);
	return pool;
}

} // namespace

TEST_CASE("window validation", "[augment][errors]") {
	CHECK_THROWS_AS(validate(SeriesWindow{Matrix(0, 1), Matrix(3, 1)}), SizeError);
	CHECK_THROWS_AS(validate(SeriesWindow{Matrix(3, 1), Matrix(0, 1)}), SizeError);
	CHECK_THROWS_AS(validate(SeriesWindow{Matrix(3, 2), Matrix(3, 1)}), SizeError);
	Matrix bad(3, 1);
	bad(1, 0) = std::nan("");
	CHECK_THROWS_AS(validate(SeriesWindow{bad, Matrix(2, 1)}), InvalidInputError);
	Rng rng(0);
	CHECK_THROWS_AS(dominant_shuffle(SeriesWindow{Matrix(0, 2), Matrix(0, 2)}, spec_for(Method::DominantShuffle), rng),
	                SizeError);
}

TEST_CASE("spec validation", "[augment][errors]") {
	AugmentSpec s;
	s.k = 0;
	CHECK_THROWS_AS(s.validate(), ParameterError);
	s = {};
	s.mask_rate = 0.0;
	CHECK_THROWS_AS(s.validate(), ParameterError);
	s.mask_rate = 1.0;
	CHECK_THROWS_AS(s.validate(), ParameterError);
	s = {};
	s.pool_size = 0;
	CHECK_THROWS_AS(s.validate(), ParameterError);
	s = {};
	s.upsample_factor = 1;
	CHECK_THROWS_AS(s.validate(), ParameterError);
	s = {};
	s.sigma = -1.0;
	CHECK_THROWS_AS(s.validate(), ParameterError);
	CHECK_THROWS_AS(parse_method("warp"), ParameterError);
	CHECK(parse_method("shuffle") == Method::DominantShuffle);
	CHECK(parse_band("minor") == Band::Minor);
}

TEST_CASE("band_select partitions the candidate set", "[augment][band]") {
	std::mt19937_64 gen(1);
	const auto x = oracle::random_series(64, gen);
	const auto s = spectral::rfft(x);

	const auto full = band_select(s, Band::Full, 4);
	CHECK(full.size() == s.size() - 2);

	auto dominant = band_select(s, Band::Dominant, 10).indices;
	const auto minor = band_select(s, Band::Minor, 4).indices;
	std::sort(dominant.begin(), dominant.end());
	std::vector<std::size_t> both;
	std::set_union(dominant.begin(), dominant.end(), minor.begin(), minor.end(), std::back_inserter(both));
	CHECK(both == full.indices);
	std::vector<std::size_t> overlap;
	std::set_intersection(dominant.begin(), dominant.end(), minor.begin(), minor.end(), std::back_inserter(overlap));
	CHECK(overlap.empty());

	// M = 6 (N = 10): the two largest non-DC bins
	const HalfSpectrum small({{50, 0}, {1, 0}, {7, 0}, {3, 0}, {9, 0}, {2, 0}}, 10);
	CHECK(band_select(small, Band::Dominant, 2).indices == std::vector<std::size_t>{4, 2});
}

TEST_CASE("band_select rejects an empty minor band", "[augment][band][errors]") {
	std::mt19937_64 gen(2);
	// N = 24 -> M = 13, 11 candidates: minor has 1 bin
	CHECK(band_select(spectral::rfft(oracle::random_series(24, gen)), Band::Minor, 4).size() == 1);
	// N = 22 -> M = 12, 10 candidates: nothing left after the top 10
	CHECK_THROWS_AS(band_select(spectral::rfft(oracle::random_series(22, gen)), Band::Minor, 4), ParameterError);
	CHECK_THROWS_AS(band_select(spectral::rfft(oracle::random_series(8, gen)), Band::Minor, 4), ParameterError);
}

TEST_CASE("dominant_shuffle with k = 1 is the identity", "[augment][shuffle]") {
	std::mt19937_64 gen(3);
	AugmentSpec spec = spec_for(Method::DominantShuffle);
	spec.k = 1;
	for (int trial = 0; trial < 20; ++trial) {
		const auto w = random_window(40, 24, 3, gen);
		Rng rng(static_cast<std::uint64_t>(trial));
		CHECK(max_abs_diff(dominant_shuffle(w, spec, rng), w) < 1e-9);
	}
}

TEST_CASE("dominant_shuffle leaves constant windows unchanged", "[augment][shuffle]") {
	const auto w = constant_window(10, 6, {2.0, -1.5, 0.0});
	AugmentSpec spec = spec_for(Method::DominantShuffle);
	spec.k = 5;
	Rng rng(9);
	CHECK(max_abs_diff(dominant_shuffle(w, spec, rng), w) < 1e-9);
}

TEST_CASE("dominant_shuffle matches the naive-transform oracle", "[augment][shuffle][oracle]") {
	std::mt19937_64 gen(4);
	AugmentSpec spec = spec_for(Method::DominantShuffle);
	spec.k = 3;
	for (std::uint64_t seed : {1u, 2u, 3u, 42u}) {
		const auto w = random_window(10, 6, 1, gen);
		Rng rng(seed);
		CHECK(max_abs_diff(dominant_shuffle(w, spec, rng), shuffle_oracle(w, 3, seed)) < 1e-9);
	}
	// multivariate, odd N
	spec.k = 4;
	const auto w = random_window(13, 8, 3, gen);
	Rng rng(77);
	CHECK(max_abs_diff(dominant_shuffle(w, spec, rng), shuffle_oracle(w, 4, 77)) < 1e-9);
}

TEST_CASE("dominant_shuffle permutes only dominant coefficients", "[augment][shuffle][property]") {
	std::mt19937_64 gen(5);
	for (int trial = 0; trial < 50; ++trial) {
		const std::size_t k = 1 + static_cast<std::size_t>(trial % 8);
		AugmentSpec spec = spec_for(Method::DominantShuffle);
		spec.k = k;
		const auto w = random_window(64, 32, 2, gen);
		Rng rng(static_cast<std::uint64_t>(trial));
		const auto out = dominant_shuffle(w, spec, rng);
		const auto before = spectra_of(w);
		const auto after = spectra_of(out);
		for (std::size_t d = 0; d < before.size(); ++d) {
			const auto top = spectral::top_k_bins(before[d], k).indices;
			std::vector<bool> dominant(before[d].size(), false);
			for (auto b : top) dominant[b] = true;
			std::vector<std::size_t> matched;
			for (std::size_t b = 0; b < before[d].size(); ++b) {
				if (!dominant[b]) {
					CHECK(std::abs(after[d][b] - before[d][b]) < 1e-12 * std::max(1.0, std::abs(before[d][b])) + 1e-12);
					continue;
				}
				// the new coefficient is one of the old dominant ones
				for (auto src : top) {
					if (std::abs(after[d][b] - before[d][src]) < 1e-9) {
						matched.push_back(src);
						break;
					}
				}
			}
			std::sort(matched.begin(), matched.end());
			auto sorted_top = top;
			std::sort(sorted_top.begin(), sorted_top.end());
			CHECK(matched == sorted_top);
			const double e0 = testing::window_energy(w, d);
			CHECK(std::abs(testing::window_energy(out, d) - e0) <= 1e-8 * e0);
		}
	}
}

TEST_CASE("dominant_shuffle shared permutation across variates", "[augment][shuffle]") {
	std::mt19937_64 gen(6);
	const auto base = random_window(30, 10, 1, gen);
	// two identical variates receive the identical permutation
	Matrix x(30, 2);
	Matrix y(10, 2);
	for (std::size_t t = 0; t < 30; ++t) x(t, 0) = x(t, 1) = base.history(t, 0);
	for (std::size_t t = 0; t < 10; ++t) y(t, 0) = y(t, 1) = base.future(t, 0);
	AugmentSpec spec = spec_for(Method::DominantShuffle);
	spec.k = 6;
	spec.per_variate_independent = false;
	Rng rng(3);
	const auto out = dominant_shuffle({x, y}, spec, rng);
	for (std::size_t t = 0; t < 30; ++t) CHECK(out.history(t, 0) == out.history(t, 1));
}

TEST_CASE("dominant_shuffle over other bands keeps energy", "[augment][shuffle]") {
	std::mt19937_64 gen(7);
	const auto w = random_window(60, 36, 2, gen);
	for (Band band : {Band::Full, Band::Minor}) {
		AugmentSpec spec = spec_for(Method::DominantShuffle);
		spec.band = band;
		Rng rng(1);
		const auto out = dominant_shuffle(w, spec, rng);
		for (std::size_t d = 0; d < 2; ++d) {
			const double e0 = testing::window_energy(w, d);
			CHECK(std::abs(testing::window_energy(out, d) - e0) <= 1e-8 * e0);
		}
		CHECK(max_abs_diff(out, w) > 1e-3);
	}
}

TEST_CASE("freq_mask always zeroes at least one bin", "[augment][mask]") {
	std::mt19937_64 gen(8);
	const auto w = random_window(8, 4, 1, gen);
	AugmentSpec spec = spec_for(Method::FreqMask);
	spec.mask_rate = 0.01;
	Rng rng(2);
	const auto after = spectra_of(freq_mask(w, spec, rng));
	std::size_t zeros = 0;
	for (std::size_t b = 1; b + 1 < after[0].size(); ++b) zeros += std::abs(after[0][b]) < 1e-12;
	CHECK(zeros == 1);
}

TEST_CASE("freq_mask over every candidate annihilates a zero-mean series", "[augment][mask]") {
	std::mt19937_64 gen(9);
	auto w = random_window(15, 6, 2, gen);
	for (std::size_t d = 0; d < 2; ++d) {
		double mean = 0.0;
		for (std::size_t t = 0; t < 15; ++t) mean += w.history(t, d);
		for (std::size_t t = 0; t < 6; ++t) mean += w.future(t, d);
		mean /= 21.0;
		for (std::size_t t = 0; t < 15; ++t) w.history(t, d) -= mean;
		for (std::size_t t = 0; t < 6; ++t) w.future(t, d) -= mean;
	}
	AugmentSpec spec = spec_for(Method::FreqMask);
	spec.mask_rate = 0.999;
	Rng rng(4);
	const auto out = freq_mask(w, spec, rng);
	CHECK(max_abs_diff(out, SeriesWindow{Matrix(15, 2), Matrix(6, 2)}) < 1e-12);
}

TEST_CASE("freq_mask never increases energy", "[augment][mask][property]") {
	std::mt19937_64 gen(10);
	for (int trial = 0; trial < 100; ++trial) {
		const auto w = random_window(48, 24, 2, gen);
		AugmentSpec spec = spec_for(Method::FreqMask);
		spec.mask_rate = 0.05 + 0.9 * (trial % 10) / 10.0;
		spec.band = static_cast<Band>(trial % 3);
		Rng rng(static_cast<std::uint64_t>(trial));
		const auto out = freq_mask(w, spec, rng);
		for (std::size_t d = 0; d < 2; ++d) {
			CHECK(testing::window_energy(out, d) <= testing::window_energy(w, d) + 1e-9);
		}
	}
}

TEST_CASE("freq_mix with itself is the identity", "[augment][mix]") {
	std::mt19937_64 gen(11);
	const auto w = random_window(20, 12, 3, gen);
	AugmentSpec spec = spec_for(Method::FreqMix);
	spec.mask_rate = 0.5;
	Rng rng(5);
	CHECK(max_abs_diff(freq_mix(w, w, spec, rng), w) < 1e-9);
}

TEST_CASE("freq_mix over every candidate takes the donor's content", "[augment][mix]") {
	std::mt19937_64 gen(12);
	const auto a = random_window(12, 9, 1, gen); // N = 21, no Nyquist bin
	const auto b = random_window(12, 9, 1, gen);
	AugmentSpec spec = spec_for(Method::FreqMix);
	spec.mask_rate = 0.999;
	Rng rng(6);
	const auto out = spectra_of(freq_mix(a, b, spec, rng));
	const auto sa = spectra_of(a);
	const auto sb = spectra_of(b);
	CHECK(std::abs(out[0][0] - sa[0][0]) < 1e-9);
	for (std::size_t k = 1; k < out[0].size(); ++k) {
		CHECK(std::abs(out[0][k] - sb[0][k]) < 1e-9);
	}
}

TEST_CASE("freq_mix matches the naive-transform oracle", "[augment][mix][oracle]") {
	std::mt19937_64 gen(13);
	const auto a = random_window(11, 5, 2, gen);
	const auto b = random_window(11, 5, 2, gen);
	AugmentSpec spec = spec_for(Method::FreqMix);
	spec.mask_rate = 0.3;
	Rng rng(99);
	const auto out = freq_mix(a, b, spec, rng);

	Rng oracle_rng(99);
	const Matrix ja = concatenate(a);
	const Matrix jb = concatenate(b);
	const std::size_t n = ja.rows();
	Matrix expected(n, 2);
	for (std::size_t d = 0; d < 2; ++d) {
		auto sa = oracle::naive_rdft(ja.column(d));
		const auto sb = oracle::naive_rdft(jb.column(d));
		std::vector<std::size_t> band;
		for (std::size_t k = 1; k < sa.size(); ++k) {
			if (!(n % 2 == 0 && k == n / 2)) band.push_back(k);
		}
		const auto count = static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(band.size())));
		for (auto k : oracle_sample(band, count, oracle_rng)) sa[k] = sb[k];
		const auto series = oracle::naive_irdft(sa, n);
		for (std::size_t t = 0; t < n; ++t) expected(t, d) = series[t];
	}
	CHECK(max_abs_diff(out, split_concatenated(expected, 11)) < 1e-9);
}

TEST_CASE("freq_mix rejects mismatched shapes", "[augment][mix][errors]") {
	std::mt19937_64 gen(14);
	Rng rng(0);
	CHECK_THROWS_AS(freq_mix(random_window(10, 5, 1, gen), random_window(10, 6, 1, gen), spec_for(Method::FreqMix), rng),
	                SizeError);
	CHECK_THROWS_AS(freq_mix(random_window(10, 5, 1, gen), random_window(10, 5, 2, gen), spec_for(Method::FreqMix), rng),
	                SizeError);
}

TEST_CASE("freq_add sets one low bin to half the peak magnitude", "[augment][add]") {
	std::mt19937_64 gen(15);
	for (int trial = 0; trial < 50; ++trial) {
		const auto w = random_window(40, 20, 2, gen);
		Rng rng(static_cast<std::uint64_t>(trial));
		const auto out = freq_add(w, spec_for(Method::FreqAdd), rng);
		const auto before = spectra_of(w);
		const auto after = spectra_of(out);
		for (std::size_t d = 0; d < 2; ++d) {
			const auto mb = spectral::magnitudes(before[d]);
			double peak = 0.0;
			for (std::size_t k = 1; k + 1 < mb.size(); ++k) peak = std::max(peak, mb[k]);
			std::vector<std::size_t> changed;
			for (std::size_t k = 0; k < mb.size(); ++k) {
				if (std::abs(after[d][k] - before[d][k]) > 1e-9) changed.push_back(k);
			}
			REQUIRE(changed.size() <= 1);
			if (changed.empty()) continue; // the drawn bin already held the target
			const std::size_t bin = changed.front();
			CHECK(bin >= 1);
			CHECK(bin <= (mb.size() - 1) / 2);
			CHECK(std::abs(std::abs(after[d][bin]) - 0.5 * peak) < 1e-9);
			CHECK(std::abs(std::arg(after[d][bin]) - std::arg(before[d][bin])) < 1e-9);
		}
	}
}

TEST_CASE("freq_add fixed points", "[augment][add]") {
	Rng rng(1);
	const auto flat = constant_window(6, 4, {3.0});
	CHECK(max_abs_diff(freq_add(flat, spec_for(Method::FreqAdd), rng), flat) < 1e-12);

	// M = 3: bin 1 is the only low bin and already at half of the peak (bin 2)
	std::vector<Complex> c{{1.0, 0.0}, {0.0, 2.0}, {-4.0, 0.0}}; // N = 5 -> no Nyquist; peak |X2| = 4
	const auto series = spectral::irfft(HalfSpectrum(c, 5));
	const SeriesWindow w = split_concatenated(Matrix(5, 1, series), 3);
	const auto out = freq_add(w, spec_for(Method::FreqAdd), rng);
	CHECK(max_abs_diff(out, w) < 1e-12);

	CHECK_THROWS_AS(freq_add(SeriesWindow{Matrix(2, 1, {1.0, 2.0}), Matrix(1, 1, {0.5})}, spec_for(Method::FreqAdd), rng),
	                SizeError);
}

TEST_CASE("freq_pool with size 1 is the identity", "[augment][pool]") {
	std::mt19937_64 gen(16);
	const auto w = random_window(30, 18, 3, gen);
	AugmentSpec spec = spec_for(Method::FreqPool);
	spec.pool_size = 1;
	CHECK(max_abs_diff(freq_pool(w, spec), w) < 1e-9);
}

TEST_CASE("freq_pool over one group lifts every bin to the peak", "[augment][pool]") {
	// decreasing magnitudes with the peak at DC
	const std::size_t n = 9;
	std::vector<Complex> c{{10.0, 0.0}, {3.0, 4.0}, {0.0, -3.0}, {1.0, 1.0}, {-0.5, 0.0}};
	const SeriesWindow w = split_concatenated(Matrix(n, 1, spectral::irfft(HalfSpectrum(c, n))), 5);
	AugmentSpec spec = spec_for(Method::FreqPool);
	spec.pool_size = c.size();
	const auto after = spectra_of(freq_pool(w, spec));
	for (std::size_t k = 0; k < c.size(); ++k) {
		CHECK(std::abs(after[0][k]) == Catch::Approx(10.0).epsilon(1e-12));
		CHECK(std::abs(after[0][k] / std::abs(after[0][k]) - c[k] / std::abs(c[k])) < 1e-9);
	}
}

TEST_CASE("freq_pool equals a grouping oracle", "[augment][pool][oracle]") {
	std::mt19937_64 gen(17);
	for (std::size_t pool : {2u, 3u, 4u, 7u}) {
		const auto w = random_window(50, 23, 2, gen);
		AugmentSpec spec = spec_for(Method::FreqPool);
		spec.pool_size = pool;
		const auto before = spectra_of(w);
		const auto after = spectra_of(freq_pool(w, spec));
		for (std::size_t d = 0; d < 2; ++d) {
			const std::size_t m = before[d].size();
			for (std::size_t k = 0; k < m; ++k) {
				const std::size_t group = k / pool;
				double peak = 0.0;
				for (std::size_t j = group * pool; j < std::min(m, (group + 1) * pool); ++j) {
					peak = std::max(peak, std::abs(before[d][j]));
				}
				CHECK(std::abs(std::abs(after[d][k]) - peak) < 1e-9);
				CHECK(std::abs(after[d][k]) >= std::abs(before[d][k]) - 1e-9);
			}
		}
	}
}

TEST_CASE("freq_noise degenerates to the identity as sigma vanishes", "[augment][noise]") {
	std::mt19937_64 gen(18);
	const auto w = random_window(30, 10, 2, gen);
	AugmentSpec spec = spec_for(Method::FreqNoise);
	spec.sigma = 1e-12;
	Rng rng(3);
	CHECK(max_abs_diff(freq_noise(w, spec, rng), w) < 1e-6);
}

TEST_CASE("freq_noise is reproducible and leaves DC alone", "[augment][noise]") {
	std::mt19937_64 gen(19);
	const auto w = random_window(30, 10, 2, gen);
	AugmentSpec spec = spec_for(Method::FreqNoise);
	spec.sigma = 0.5;
	Rng a(11);
	Rng b(11);
	const auto out_a = freq_noise(w, spec, a);
	const auto out_b = freq_noise(w, spec, b);
	CHECK(out_a == out_b);
	const auto before = spectra_of(w);
	const auto after = spectra_of(out_a);
	for (std::size_t d = 0; d < 2; ++d) {
		CHECK(std::abs(after[d][0] - before[d][0]) < 1e-9);
		CHECK(std::abs(after[d][20] - before[d][20]) < 1e-9); // Nyquist of N = 40
	}
}

TEST_CASE("freq_noise energy increase matches its expectation", "[augment][noise][oracle]") {
	// Each perturbed bin gains 2 std^2 of |X|^2 on average; Parseval turns a
	// half-spectrum bin into 2/N of time-domain energy. A zero signal removes
	// the zero-mean cross term so the estimate's spread is about 0.3%.
	const auto w = constant_window(24, 8, {0.0}); // N = 32, 15 candidate bins
	AugmentSpec spec = spec_for(Method::FreqNoise);
	spec.sigma = 0.2;
	spec.noise_scale = NoiseScale::Absolute;
	const std::size_t n = 32;
	const double e0 = 0.0;
	const double expected = 2.0 / static_cast<double>(n) * 15.0 * 2.0 * spec.sigma * spec.sigma;
	double total = 0.0;
	const int draws = 10000;
	for (int i = 0; i < draws; ++i) {
		Rng rng(static_cast<std::uint64_t>(i));
		total += testing::window_energy(freq_noise(w, spec, rng), 0) - e0;
	}
	CHECK(std::abs(total / draws - expected) < 0.05 * expected);
}

TEST_CASE("freq_random keeps band magnitudes within the band range", "[augment][random]") {
	std::mt19937_64 gen(21);
	for (int trial = 0; trial < 40; ++trial) {
		const auto w = random_window(60, 30, 2, gen);
		AugmentSpec spec = spec_for(Method::FreqRandom);
		spec.band = static_cast<Band>(trial % 3);
		spec.k = 10;
		Rng rng(static_cast<std::uint64_t>(trial));
		const auto out = freq_random(w, spec, rng);
		const auto before = spectra_of(w);
		const auto after = spectra_of(out);
		for (std::size_t d = 0; d < 2; ++d) {
			const auto band = band_select(before[d], *spec.band, 10).indices;
			const auto mags = spectral::magnitudes(before[d]);
			double lo = 1e300;
			double hi = 0.0;
			for (auto b : band) {
				lo = std::min(lo, mags[b]);
				hi = std::max(hi, mags[b]);
			}
			std::vector<bool> in_band(mags.size(), false);
			for (auto b : band) in_band[b] = true;
			for (std::size_t b = 0; b < mags.size(); ++b) {
				if (in_band[b]) {
					CHECK(std::abs(after[d][b]) >= lo - 1e-9);
					CHECK(std::abs(after[d][b]) <= hi + 1e-9);
				} else {
					CHECK(std::abs(after[d][b] - before[d][b]) < 1e-9);
				}
			}
		}
		Rng again(static_cast<std::uint64_t>(trial));
		CHECK(freq_random(w, spec, again) == out);
	}
}

TEST_CASE("freq_random over a flat band is the identity", "[augment][random]") {
	// every candidate bin has magnitude 2 with its own phase
	const std::size_t n = 16;
	std::vector<Complex> c(n / 2 + 1);
	c[0] = {5.0, 0.0};
	for (std::size_t k = 1; k < n / 2; ++k) c[k] = std::polar(2.0, 0.3 * static_cast<double>(k));
	c[n / 2] = {1.0, 0.0};
	const SeriesWindow w = split_concatenated(Matrix(n, 1, spectral::irfft(HalfSpectrum(c, n))), 10);
	AugmentSpec spec = spec_for(Method::FreqRandom);
	spec.band = Band::Full;
	Rng rng(8);
	CHECK(max_abs_diff(freq_random(w, spec, rng), w) < 1e-9);
}

TEST_CASE("upsample_aug", "[augment][upsample]") {
	AugmentSpec spec = spec_for(Method::Upsample);
	Rng rng(1);
	const auto flat = constant_window(7, 3, {1.25, -2.0});
	CHECK(max_abs_diff(upsample_aug(flat, spec, rng), flat) < 1e-15);

	// ramp 0..N-1 with offset 0 becomes 0, 0.5, 1, ...; seed 0 happens to draw
	// other offsets so the ramp shape (slope 1/2) is checked for any offset
	Matrix joined(12, 1);
	for (std::size_t t = 0; t < 12; ++t) joined(t, 0) = static_cast<double>(t);
	const auto ramp = split_concatenated(joined, 8);
	for (std::uint64_t seed = 0; seed < 20; ++seed) {
		Rng r(seed);
		const Matrix out = concatenate(upsample_aug(ramp, spec, r));
		for (std::size_t t = 1; t < 12; ++t) {
			CHECK(out(t, 0) - out(t - 1, 0) == Catch::Approx(0.5).epsilon(1e-14));
		}
		CHECK(out(0, 0) >= 0.0);
		CHECK(out(11, 0) <= 11.0);
		if (out(0, 0) == 0.0) {
			CHECK(out(11, 0) == Catch::Approx(5.5));
		}
	}

	std::mt19937_64 gen(22);
	for (int trial = 0; trial < 50; ++trial) {
		const auto w = random_window(20, 10, 3, gen);
		spec.upsample_factor = 2 + static_cast<std::size_t>(trial % 4);
		Rng r(static_cast<std::uint64_t>(trial));
		const auto out = upsample_aug(w, spec, r);
		CHECK(testing::same_shape(out, w));
		const Matrix a = concatenate(w);
		const Matrix b = concatenate(out);
		for (std::size_t d = 0; d < 3; ++d) {
			const auto col_a = a.column(d);
			const auto col_b = b.column(d);
			CHECK(*std::max_element(col_b.begin(), col_b.end()) <= *std::max_element(col_a.begin(), col_a.end()));
			CHECK(*std::min_element(col_b.begin(), col_b.end()) >= *std::min_element(col_a.begin(), col_a.end()));
		}
	}
}

TEST_CASE("every operator preserves shape and finiteness", "[augment][property]") {
	std::mt19937_64 gen(23);
	for (Method m : {Method::DominantShuffle, Method::FreqMask, Method::FreqMix, Method::FreqAdd, Method::FreqPool,
	                 Method::FreqNoise, Method::FreqRandom, Method::Upsample}) {
		for (auto [l, t] : {std::pair{5u, 4u}, std::pair{96u, 96u}, std::pair{33u, 17u}}) {
			const auto w = random_window(l, t, 3, gen);
			const auto donor = random_window(l, t, 3, gen);
			Rng rng(1);
			const auto out = apply(w, &donor, spec_for(m), rng);
			INFO(to_string(m) << " L=" << l << " T=" << t);
			CHECK(testing::same_shape(out, w));
			CHECK(out.history.all_finite());
			CHECK(out.future.all_finite());
			Rng again(1);
			CHECK(apply(w, &donor, spec_for(m), again) == out);
		}
	}
}
