#pragma once

// Benchmark CSV ingestion, chronological train/validation/test splits,
// train-fitted z-score normalization and sliding-window sampling.

#include "dshuffle/augment.hpp"
#include "dshuffle/matrix.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dshuffle::data {

struct RawDataset {
	std::string name;
	std::vector<std::string> timestamps;
	Matrix values; // rows x variates
	std::vector<std::string> variate_names;

	std::size_t rows() const noexcept { return values.rows(); }
	std::size_t variates() const noexcept { return values.cols(); }
};

// First column is a timestamp kept verbatim; every other column must parse
// as a finite number. Throws ParseError (with line number) for malformed
// rows and DataError for missing or non-numeric cells.
RawDataset parse_csv(std::istream& in, std::string name);

// parse_csv on a file; the dataset name is the file stem. Throws IoError if
// the file cannot be opened.
RawDataset load_csv(const std::filesystem::path& path);

// Half-open row interval [begin, end).
struct RowRange {
	std::size_t begin = 0;
	std::size_t end = 0;

	std::size_t size() const noexcept { return end - begin; }

	friend bool operator==(const RowRange&, const RowRange&) = default;
};

struct SplitPolicy {
	enum class Kind {
		Automatic, // named benchmark counts when known, else ratio 7:1:2
		Ratio,
		Counts
	};

	Kind kind = Kind::Automatic;
	std::size_t train = 0;
	std::size_t validation = 0;
	std::size_t test = 0;

	static SplitPolicy automatic() { return {}; }
	static SplitPolicy ratio(std::size_t train, std::size_t validation, std::size_t test) {
		return {Kind::Ratio, train, validation, test};
	}
	static SplitPolicy counts(std::size_t train, std::size_t validation, std::size_t test) {
		return {Kind::Counts, train, validation, test};
	}
};

// Published (train, validation, test) row counts for a benchmark name such as
// "ETTh1" or "weather" (case-insensitive); nullopt when unknown.
std::optional<SplitPolicy> benchmark_counts(const std::string& name);

// Ratio used by the long-term protocol for a benchmark family: 6:2:2 for ETT
// and PEMS, 7:1:2 otherwise.
SplitPolicy benchmark_ratio(const std::string& name);

// Per-variate z-score parameters (population standard deviation).
class Normalizer {
public:
	Normalizer() = default;
	Normalizer(std::vector<double> mean, std::vector<double> stddev);

	// Throws DataError if any variate in `rows` is constant or rows is empty.
	static Normalizer fit(const Matrix& values, RowRange rows, const std::vector<std::string>& names = {});

	Matrix apply(const Matrix& values) const;
	Matrix invert(const Matrix& values) const;

	const std::vector<double>& mean() const noexcept { return mean_; }
	const std::vector<double>& stddev() const noexcept { return stddev_; }

	friend bool operator==(const Normalizer&, const Normalizer&) = default;

private:
	std::vector<double> mean_;
	std::vector<double> stddev_;
};

struct DatasetSplits {
	RowRange train;
	RowRange validation;
	RowRange test;
	Normalizer normalizer;
};

// Contiguous chronological partitions starting at row 0. Counts policies must
// fit in the dataset; ratio policies floor validation and test and give the
// remainder to train. Fits the normalizer on the train rows.
// Throws SizeError when a partition would be empty and DataError for
// constant variates.
DatasetSplits split(const RawDataset& dataset, SplitPolicy policy);

struct WindowSampler {
	std::size_t lookback = 96;
	std::size_t horizon = 96;
	std::size_t stride = 1;
};

enum class Partition { Train, Validation, Test };

// Number of windows a range of `rows` rows yields; zero when too short.
std::size_t window_count(std::size_t rows, const WindowSampler& sampler);

// Windows over an explicit row range: window i covers rows
// [begin + i*stride, begin + i*stride + L) as history and the next T rows as
// future. Throws SizeError when the range holds fewer than L + T rows.
std::vector<augment::SeriesWindow> windows(const Matrix& values, RowRange rows, const WindowSampler& sampler);

// Window i of `rows` without materializing the others.
augment::SeriesWindow window_at(const Matrix& values, RowRange rows, const WindowSampler& sampler, std::size_t index);

// Row range windows of a partition are drawn from: validation and test reach
// back L - 1 rows into the preceding partition for history only.
RowRange window_range(const DatasetSplits& splits, Partition partition, const WindowSampler& sampler);

std::vector<augment::SeriesWindow> windows(const Matrix& values, const DatasetSplits& splits, Partition partition,
                                           const WindowSampler& sampler);

// Split manifest and normalizer statistics for reproducibility audits.
nlohmann::json manifest(const RawDataset& dataset, const DatasetSplits& splits);

// A loaded, split and normalized dataset.
struct PreparedDataset {
	RawDataset raw;
	DatasetSplits splits;
	Matrix normalized;
};

PreparedDataset prepare(const std::filesystem::path& path, SplitPolicy policy = SplitPolicy::automatic());

} // namespace dshuffle::data
