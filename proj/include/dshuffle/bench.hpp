#pragma once

// Config-driven experiment grid: baseline, method list x size multipliers,
// dominant-set size sweep, band x operator grid and validation-tuned k, each
// repeated over seeds and horizons with a ridge forecaster.

#include "dshuffle/augment.hpp"
#include "dshuffle/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dshuffle::bench {

struct MethodEntry {
	std::string label; // defaults to the method name
	augment::AugmentSpec spec;
};

struct ExperimentConfig {
	std::filesystem::path dataset;
	data::SplitPolicy split = data::SplitPolicy::automatic();
	std::size_t lookback = 96;
	std::size_t stride = 1;
	std::vector<std::size_t> horizons{96, 192, 336, 720};
	std::vector<MethodEntry> methods;
	std::vector<std::size_t> size_multipliers{2};
	// dominant-shuffle k values swept at multiplier 2; empty disables
	std::vector<std::size_t> k_sweep{1, 2, 3, 4, 5, 8, 10};
	// {dominant, minor, full} x {shuffle, mask, noise, random} at multiplier 2
	bool band_grid = false;
	std::size_t band_grid_k = 10;
	// pick k from k_sweep on the validation split, report test
	bool auto_k = false;
	std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
	double ridge_lambda = 1e-3;
	std::filesystem::path output;
	std::string format = "csv";
	std::size_t workers = 1;
};

// Throws ParameterError on unknown keys, wrong types or invalid values.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

augment::AugmentSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const augment::AugmentSpec& spec);

struct Record {
	std::string sweep; // baseline | methods | k_sweep | band_grid | auto_k
	std::string dataset;
	std::string method;
	std::string band;
	std::size_t k = 0;
	std::string params;
	std::size_t horizon = 0;
	std::size_t multiplier = 1;
	std::uint64_t seed = 0;
	std::optional<double> mse; // unset for failed cells
	std::optional<double> mae;
	double wall_time = 0.0;
	std::string status = "ok";
	std::string error;

	friend bool operator==(const Record&, const Record&) = default;
};

struct SummaryRow {
	std::string sweep;
	std::string method;
	std::string band;
	std::size_t k = 0;
	std::string params;
	std::size_t horizon = 0;
	std::size_t multiplier = 1;
	std::size_t runs = 0;
	double mse_mean = 0.0;
	double mse_std = 0.0;
	double mae_mean = 0.0;
	double mae_std = 0.0;
	std::optional<double> relative_improvement;
};

struct ExperimentResult {
	std::vector<Record> records;

	// Grouped over seeds (sample standard deviation; 0 for a single run).
	std::vector<SummaryRow> summary() const;

	// Mean baseline MSE for (dataset, horizon), if present.
	std::optional<double> baseline_mse(const std::string& dataset, std::size_t horizon) const;

	// (baseline_mse - record mse) / baseline_mse.
	std::optional<double> relative_improvement(const Record& record) const;
};

// Runs every cell of the grid. A failing cell is recorded with status
// "failed" and the grid continues. Results are independent of `workers`.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Same grid on already prepared data (used by tests and the acceptance suite).
ExperimentResult run_experiment(const ExperimentConfig& config, const data::PreparedDataset& prepared);

// Number of records run_experiment produces for a config.
std::size_t expected_records(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader =
    "sweep,dataset,method,band,k,params,horizon,multiplier,seed,mse,mae,relative_improvement,wall_time_s,status,error";

// format is "csv" or "json". Throws IoError naming the path on failure.
void emit_results(const ExperimentResult& result, const std::filesystem::path& path, const std::string& format);

std::string to_csv(const ExperimentResult& result);
nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& doc);

} // namespace dshuffle::bench
