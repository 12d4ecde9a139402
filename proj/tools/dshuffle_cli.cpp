// dshuffle: frequency-domain augmentation for multivariate forecasting windows.
//
//   dshuffle augment --input data.csv --method shuffle --k 4 --out augmented.csv
//   dshuffle bench   --config experiment.json --out results/ --workers 4
//   dshuffle inspect --input data.csv --window 0 --k 4

#include "dshuffle/batch.hpp"
#include "dshuffle/bench.hpp"
#include "dshuffle/dataset.hpp"
#include "dshuffle/error.hpp"
#include "dshuffle/spectral.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace dshuffle;

data::Partition parse_partition(const std::string& name) {
	if (name == "train") return data::Partition::Train;
	if (name == "validation" || name == "val") return data::Partition::Validation;
	if (name == "test") return data::Partition::Test;
	throw ParameterError("unknown partition '" + name + "'");
}

struct AugmentOptions {
	std::string input;
	std::string output;
	std::string method = "dominant_shuffle";
	std::string band;
	std::size_t k = 4;
	std::size_t lookback = 96;
	std::size_t horizon = 96;
	std::size_t stride = 1;
	std::uint64_t seed = 0;
	std::size_t multiplier = 2;
	double mask_rate = 0.1;
	double sigma = 0.1;
	std::size_t pool_size = 4;
	std::size_t factor = 2;
	std::string partition = "train";
	bool denormalize = false;
};

int run_augment(const AugmentOptions& o) {
	const data::PreparedDataset prepared = data::prepare(o.input);
	const data::WindowSampler sampler{o.lookback, o.horizon, o.stride};
	const auto windows = data::windows(prepared.normalized, prepared.splits, parse_partition(o.partition), sampler);

	augment::AugmentSpec spec;
	spec.method = augment::parse_method(o.method);
	if (!o.band.empty()) {
		spec.band = augment::parse_band(o.band);
	}
	spec.k = o.k;
	spec.seed = o.seed;
	spec.mask_rate = o.mask_rate;
	spec.sigma = o.sigma;
	spec.pool_size = o.pool_size;
	spec.upsample_factor = o.factor;
	spec.validate();

	const auto augmented = augment::augment_batch(windows, spec, o.multiplier);

	std::ofstream file;
	if (!o.output.empty()) {
		file.open(o.output);
		if (!file) {
			throw IoError("cannot write '" + o.output + "'");
		}
	}
	std::ostream& out = o.output.empty() ? std::cout : file;
	out.precision(17);
	out << "window,copy,method,seed,partner,step,part";
	for (const auto& name : prepared.raw.variate_names) {
		out << ',' << name;
	}
	out << '\n';
	const std::size_t n = windows.size();
	for (std::size_t j = 0; j < augmented.size(); ++j) {
		const auto& w = augmented[j];
		const auto& p = w.provenance;
		Matrix joined = augment::concatenate(w);
		if (o.denormalize) {
			joined = prepared.splits.normalizer.invert(joined);
		}
		const std::string method = p.method ? std::string(augment::to_string(*p.method)) : "original";
		for (std::size_t t = 0; t < joined.rows(); ++t) {
			out << p.source << ',' << j / n << ',' << method << ',' << p.seed << ','
			    << (p.partner ? std::to_string(*p.partner) : "") << ',' << t << ','
			    << (t < w.lookback() ? 'x' : 'y');
			for (double v : joined.row(t)) {
				out << ',' << v;
			}
			out << '\n';
		}
	}
	return 0;
}

struct BenchOptions {
	std::string config;
	std::string out = "results";
	std::size_t workers = 0;
};

int run_bench(const BenchOptions& o) {
	bench::ExperimentConfig config = bench::load_config(o.config);
	if (o.workers > 0) {
		config.workers = o.workers;
	}
	std::filesystem::create_directories(o.out);

	const data::PreparedDataset prepared = data::prepare(config.dataset, config.split);
	{
		std::ofstream manifest(std::filesystem::path(o.out) / "split_manifest.json");
		manifest << data::manifest(prepared.raw, prepared.splits).dump(2) << '\n';
	}
	const bench::ExperimentResult result = bench::run_experiment(config, prepared);
	const auto path = std::filesystem::path(o.out) / ("results." + config.format);
	bench::emit_results(result, path, config.format);

	std::size_t failed = 0;
	for (const auto& r : result.records) {
		failed += r.status != "ok";
	}
	std::cerr << "wrote " << result.records.size() << " records (" << failed << " failed) to " << path.string()
	          << '\n';
	for (const auto& s : result.summary()) {
		std::cerr << s.sweep << ' ' << s.method << ' ' << s.params << " T=" << s.horizon << " x" << s.multiplier
		          << " mse=" << s.mse_mean << " +- " << s.mse_std;
		if (s.relative_improvement) {
			std::cerr << " rel=" << *s.relative_improvement;
		}
		std::cerr << '\n';
	}
	return failed == 0 ? 0 : 3;
}

struct InspectOptions {
	std::string input;
	std::size_t window = 0;
	std::size_t lookback = 96;
	std::size_t horizon = 96;
	std::size_t k = 4;
	std::string partition = "train";
	bool include_dc = false;
	bool include_nyquist = false;
};

int run_inspect(const InspectOptions& o) {
	const data::PreparedDataset prepared = data::prepare(o.input);
	const data::WindowSampler sampler{o.lookback, o.horizon, 1};
	const auto range = data::window_range(prepared.splits, parse_partition(o.partition), sampler);
	const auto window = data::window_at(prepared.normalized, range, sampler, o.window);
	const Matrix joined = augment::concatenate(window);
	const spectral::CandidatePolicy policy{o.include_dc, o.include_nyquist};

	std::cout.precision(17);
	std::cout << "variate,bin,real,imag,magnitude,dominant_rank\n";
	for (std::size_t d = 0; d < joined.cols(); ++d) {
		const auto spectrum = spectral::rfft(joined.column(d));
		const auto mags = spectral::magnitudes(spectrum);
		const auto top = spectral::top_k_bins(spectrum, o.k, policy);
		std::map<std::size_t, std::size_t> rank;
		for (std::size_t r = 0; r < top.indices.size(); ++r) {
			rank[top.indices[r]] = r + 1;
		}
		const std::string name =
		    d < prepared.raw.variate_names.size() ? prepared.raw.variate_names[d] : std::to_string(d);
		for (std::size_t bin = 0; bin < spectrum.size(); ++bin) {
			std::cout << name << ',' << bin << ',' << spectrum[bin].real() << ',' << spectrum[bin].imag() << ','
			          << mags[bin] << ',';
			if (auto it = rank.find(bin); it != rank.end()) {
				std::cout << it->second;
			}
			std::cout << '\n';
		}
	}
	return 0;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"Frequency-domain augmentation for time-series forecasting"};
	app.require_subcommand(1);

	AugmentOptions aug;
	auto* augment_cmd = app.add_subcommand("augment", "Write augmented windows of a CSV dataset as CSV");
	augment_cmd->add_option("--input,-i", aug.input, "Input CSV (timestamp column first)")->required();
	augment_cmd->add_option("--out,-o", aug.output, "Output CSV (default: stdout)");
	augment_cmd->add_option("--method", aug.method, "dominant_shuffle|freq_mask|freq_mix|freq_add|freq_pool|"
	                                                "freq_noise|freq_random|upsample");
	augment_cmd->add_option("--k", aug.k, "Dominant bins")->check(CLI::PositiveNumber);
	augment_cmd->add_option("--band", aug.band, "full|dominant|minor (default: per method)");
	augment_cmd->add_option("--lookback", aug.lookback, "History length L")->check(CLI::PositiveNumber);
	augment_cmd->add_option("--horizon", aug.horizon, "Future length T")->check(CLI::PositiveNumber);
	augment_cmd->add_option("--stride", aug.stride, "Window stride")->check(CLI::PositiveNumber);
	augment_cmd->add_option("--seed", aug.seed, "Batch seed");
	augment_cmd->add_option("--multiplier", aug.multiplier, "Output size / input size")->check(CLI::PositiveNumber);
	augment_cmd->add_option("--mask-rate", aug.mask_rate, "Fraction of band bins for mask/mix");
	augment_cmd->add_option("--sigma", aug.sigma, "Noise scale relative to mean magnitude");
	augment_cmd->add_option("--pool-size", aug.pool_size, "Max-pool group size");
	augment_cmd->add_option("--factor", aug.factor, "Upsample factor");
	augment_cmd->add_option("--partition", aug.partition, "train|validation|test");
	augment_cmd->add_flag("--denormalize", aug.denormalize, "Write values on the raw scale");

	BenchOptions bench_opts;
	auto* bench_cmd = app.add_subcommand("bench", "Run an experiment grid from a JSON config");
	bench_cmd->add_option("--config,-c", bench_opts.config, "Experiment config (JSON)")->required();
	bench_cmd->add_option("--out,-o", bench_opts.out, "Output directory");
	bench_cmd->add_option("--workers,-w", bench_opts.workers, "Grid cells run in parallel (overrides config)");

	InspectOptions ins;
	auto* inspect_cmd = app.add_subcommand("inspect", "Print a window's magnitude spectrum and dominant bins as CSV");
	inspect_cmd->add_option("--input,-i", ins.input, "Input CSV")->required();
	inspect_cmd->add_option("--window", ins.window, "Window index within the partition");
	inspect_cmd->add_option("--lookback", ins.lookback)->check(CLI::PositiveNumber);
	inspect_cmd->add_option("--horizon", ins.horizon)->check(CLI::PositiveNumber);
	inspect_cmd->add_option("--k", ins.k)->check(CLI::PositiveNumber);
	inspect_cmd->add_option("--partition", ins.partition, "train|validation|test");
	inspect_cmd->add_flag("--include-dc", ins.include_dc);
	inspect_cmd->add_flag("--include-nyquist", ins.include_nyquist);

	CLI11_PARSE(app, argc, argv);

	try {
		if (*augment_cmd) return run_augment(aug);
		if (*bench_cmd) return run_bench(bench_opts);
		if (*inspect_cmd) return run_inspect(ins);
	} catch (const dshuffle::Error& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	}
	return 1;
}
