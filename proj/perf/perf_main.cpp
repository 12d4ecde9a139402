// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to the
// number of cores to see the parallel speed-up.

#include "dshuffle/batch.hpp"
#include "dshuffle/forecaster.hpp"
#include "dshuffle/spectral.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

using namespace dshuffle;

std::vector<augment::SeriesWindow> make_windows(std::size_t count, std::size_t lookback, std::size_t horizon,
                                                std::size_t variates) {
	std::mt19937_64 gen(11);
	std::normal_distribution<double> noise(0.0, 0.3);
	std::vector<augment::SeriesWindow> out;
	out.reserve(count);
	for (std::size_t w = 0; w < count; ++w) {
		Matrix history(lookback, variates);
		Matrix future(horizon, variates);
		for (std::size_t t = 0; t < lookback + horizon; ++t) {
			for (std::size_t v = 0; v < variates; ++v) {
				const double value = std::sin(0.26 * static_cast<double>(t + w) * static_cast<double>(v + 1)) + noise(gen);
				if (t < lookback) {
					history(t, v) = value;
				} else {
					future(t - lookback, v) = value;
				}
			}
		}
		out.push_back({std::move(history), std::move(future)});
	}
	return out;
}

using AccumulateFn = forecast::NormalEquations (*)(std::size_t, std::size_t, std::size_t, const augment::WindowSource&);
constexpr AccumulateFn parallel_accumulate = &forecast::accumulate;
constexpr AccumulateFn serial_accumulate = &forecast::serial::accumulate;

const std::vector<augment::SeriesWindow>& windows() {
	static const auto w = make_windows(512, 96, 96, 7);
	return w;
}

template <auto Batch>
void BM_AugmentBatch(benchmark::State& state) {
	augment::AugmentSpec spec;
	spec.k = 8;
	spec.seed = 3;
	for (auto _ : state) {
		benchmark::DoNotOptimize(Batch(windows(), spec, 2));
	}
	state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(windows().size()));
}

template <auto Accumulate>
void BM_Accumulate(benchmark::State& state) {
	const auto& w = windows();
	const augment::WindowSource source = [&w](std::size_t i) { return w[i]; };
	for (auto _ : state) {
		benchmark::DoNotOptimize(Accumulate(96, 96, w.size(), source));
	}
	state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.size()));
}

void BM_Rfft(benchmark::State& state) {
	const auto n = static_cast<std::size_t>(state.range(0));
	std::vector<double> series(n);
	std::mt19937_64 gen(5);
	std::uniform_real_distribution<double> dist(-1.0, 1.0);
	for (auto& x : series) {
		x = dist(gen);
	}
	for (auto _ : state) {
		benchmark::DoNotOptimize(spectral::rfft(series));
	}
}

BENCHMARK_TEMPLATE(BM_AugmentBatch, augment::serial::augment_batch)->Name("augment_batch/serial")->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_AugmentBatch, augment::augment_batch)->Name("augment_batch/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_Accumulate, serial_accumulate)->Name("accumulate/serial")->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_Accumulate, parallel_accumulate)->Name("accumulate/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rfft)->Arg(96)->Arg(97)->Arg(336)->Arg(720)->Arg(1009)->Arg(4096);

} // namespace

BENCHMARK_MAIN();
