#include "dshuffle/dataset.hpp"

#include "dshuffle/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

namespace dshuffle::data {

namespace {

std::string_view trim(std::string_view s) {
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
		s.remove_prefix(1);
	}
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
		s.remove_suffix(1);
	}
	return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
	std::vector<std::string_view> fields;
	std::size_t start = 0;
	while (true) {
		const std::size_t comma = line.find(',', start);
		if (comma == std::string_view::npos) {
			fields.push_back(trim(line.substr(start)));
			return fields;
		}
		fields.push_back(trim(line.substr(start, comma - start)));
		start = comma + 1;
	}
}

std::string lower(std::string s) {
	std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
	return s;
}

} // namespace

RawDataset parse_csv(std::istream& in, std::string name) {
	RawDataset out;
	out.name = std::move(name);

	std::string line;
	std::size_t line_no = 0;
	bool have_header = false;
	std::size_t columns = 0;
	std::vector<double> values;
	std::size_t pending_blank = 0;

	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		if (trim(line).empty()) {
			++pending_blank;
			continue;
		}
		if (pending_blank > 0 && have_header) {
			throw ParseError("blank line inside data", line_no - 1);
		}
		pending_blank = 0;

		const std::vector<std::string_view> fields = split_fields(line);
		if (!have_header) {
			if (fields.size() < 2) {
				throw ParseError("header needs a timestamp column and at least one variate", line_no);
			}
			for (std::size_t c = 1; c < fields.size(); ++c) {
				out.variate_names.emplace_back(fields[c]);
			}
			columns = fields.size();
			have_header = true;
			continue;
		}
		if (fields.size() != columns) {
			throw ParseError("expected " + std::to_string(columns) + " fields, found " + std::to_string(fields.size()),
			                 line_no);
		}
		const std::size_t row = out.timestamps.size();
		out.timestamps.emplace_back(fields[0]);
		for (std::size_t c = 1; c < columns; ++c) {
			const std::string_view cell = fields[c];
			const std::string& column = out.variate_names[c - 1];
			if (cell.empty()) {
				throw DataError("missing value at data row " + std::to_string(row + 1) + " (line " +
				                std::to_string(line_no) + "), column '" + column + "'");
			}
			double v = 0.0;
			const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
			if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
				throw ParseError("column '" + column + "': cannot parse '" + std::string(cell) + "' as a number",
				                 line_no);
			}
			if (!std::isfinite(v)) {
				throw DataError("missing value at data row " + std::to_string(row + 1) + " (line " +
				                std::to_string(line_no) + "), column '" + column + "'");
			}
			values.push_back(v);
		}
	}
	if (!have_header) {
		throw ParseError("empty input, no header row", std::max<std::size_t>(line_no, 1));
	}
	out.values = Matrix(out.timestamps.size(), columns - 1, std::move(values));
	return out;
}

RawDataset load_csv(const std::filesystem::path& path) {
	std::ifstream in(path);
	if (!in) {
		throw IoError("cannot open '" + path.string() + "'");
	}
	return parse_csv(in, path.stem().string());
}

std::optional<SplitPolicy> benchmark_counts(const std::string& name) {
	struct Entry {
		std::string_view name;
		std::size_t train, validation, test;
	};
	static constexpr Entry table[] = {
	    {"etth1", 8545, 2881, 2881},      {"etth2", 8545, 2881, 2881},       {"ettm1", 34465, 11521, 11521},
	    {"ettm2", 34465, 11521, 11521},   {"exchange", 5120, 665, 1422},     {"exchange_rate", 5120, 665, 1422},
	    {"weather", 36792, 5271, 10540},  {"ecl", 18317, 2633, 5261},        {"electricity", 18317, 2633, 5261},
	    {"traffic", 12185, 1757, 3509},   {"pems03", 15617, 5135, 5135},     {"pems04", 10172, 3375, 3375},
	    {"pems07", 16911, 5622, 5622},    {"pems08", 10690, 3548, 3548},
	};
	const std::string key = lower(name);
	for (const auto& e : table) {
		if (e.name == key) {
			return SplitPolicy::counts(e.train, e.validation, e.test);
		}
	}
	return std::nullopt;
}

SplitPolicy benchmark_ratio(const std::string& name) {
	const std::string key = lower(name);
	if (key.starts_with("ett") || key.starts_with("pems")) {
		return SplitPolicy::ratio(6, 2, 2);
	}
	return SplitPolicy::ratio(7, 1, 2);
}

Normalizer::Normalizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
	if (mean_.size() != stddev_.size()) {
		throw SizeError("normalizer: mean and stddev lengths differ");
	}
	for (std::size_t d = 0; d < stddev_.size(); ++d) {
		if (!(stddev_[d] > 0.0) || !std::isfinite(stddev_[d]) || !std::isfinite(mean_[d])) {
			throw DataError("normalizer: variate " + std::to_string(d) + " has zero or invalid stddev");
		}
	}
}

Normalizer Normalizer::fit(const Matrix& values, RowRange rows, const std::vector<std::string>& names) {
	if (rows.size() == 0 || rows.end > values.rows()) {
		throw SizeError("normalizer: empty or out-of-range fitting rows");
	}
	const std::size_t dims = values.cols();
	std::vector<double> mean(dims, 0.0);
	std::vector<double> stddev(dims, 0.0);
	const auto count = static_cast<double>(rows.size());
	for (std::size_t d = 0; d < dims; ++d) {
		double sum = 0.0;
		for (std::size_t r = rows.begin; r < rows.end; ++r) {
			sum += values(r, d);
		}
		mean[d] = sum / count;
		double sq = 0.0;
		for (std::size_t r = rows.begin; r < rows.end; ++r) {
			const double dev = values(r, d) - mean[d];
			sq += dev * dev;
		}
		stddev[d] = std::sqrt(sq / count);
		if (!(stddev[d] > 0.0)) {
			const std::string label = d < names.size() ? "'" + names[d] + "'" : std::to_string(d);
			throw DataError("variate " + label + " is constant over the training rows; cannot normalize");
		}
	}
	return Normalizer(std::move(mean), std::move(stddev));
}

Matrix Normalizer::apply(const Matrix& values) const {
	if (values.cols() != mean_.size()) {
		throw SizeError("normalizer: variate count mismatch");
	}
	Matrix out(values.rows(), values.cols());
	for (std::size_t r = 0; r < values.rows(); ++r) {
		for (std::size_t d = 0; d < values.cols(); ++d) {
			out(r, d) = (values(r, d) - mean_[d]) / stddev_[d];
		}
	}
	return out;
}

Matrix Normalizer::invert(const Matrix& values) const {
	if (values.cols() != mean_.size()) {
		throw SizeError("normalizer: variate count mismatch");
	}
	Matrix out(values.rows(), values.cols());
	for (std::size_t r = 0; r < values.rows(); ++r) {
		for (std::size_t d = 0; d < values.cols(); ++d) {
			out(r, d) = values(r, d) * stddev_[d] + mean_[d];
		}
	}
	return out;
}

DatasetSplits split(const RawDataset& dataset, SplitPolicy policy) {
	const std::size_t rows = dataset.rows();
	if (policy.kind == SplitPolicy::Kind::Automatic) {
		policy = benchmark_counts(dataset.name).value_or(SplitPolicy::ratio(7, 1, 2));
	}

	std::size_t train = 0;
	std::size_t validation = 0;
	std::size_t test = 0;
	if (policy.kind == SplitPolicy::Kind::Counts) {
		train = policy.train;
		validation = policy.validation;
		test = policy.test;
		if (train + validation + test > rows) {
			throw SizeError("split: dataset '" + dataset.name + "' has " + std::to_string(rows) + " rows, counts need " +
			                std::to_string(train + validation + test));
		}
	} else {
		const std::size_t parts = policy.train + policy.validation + policy.test;
		if (parts == 0) {
			throw ParameterError("split: ratio parts must not all be zero");
		}
		validation = rows * policy.validation / parts;
		test = rows * policy.test / parts;
		train = rows - validation - test;
	}
	if (train == 0 || validation == 0 || test == 0) {
		throw SizeError("split: dataset '" + dataset.name + "' with " + std::to_string(rows) +
		                " rows leaves an empty partition");
	}

	DatasetSplits out;
	out.train = {0, train};
	out.validation = {train, train + validation};
	out.test = {train + validation, train + validation + test};
	out.normalizer = Normalizer::fit(dataset.values, out.train, dataset.variate_names);
	return out;
}

std::size_t window_count(std::size_t rows, const WindowSampler& sampler) {
	const std::size_t span = sampler.lookback + sampler.horizon;
	if (sampler.stride == 0 || rows < span) {
		return 0;
	}
	return (rows - span) / sampler.stride + 1;
}

std::vector<augment::SeriesWindow> windows(const Matrix& values, RowRange rows, const WindowSampler& sampler) {
	if (sampler.lookback == 0 || sampler.horizon == 0 || sampler.stride == 0) {
		throw ParameterError("windows: lookback, horizon and stride must be positive");
	}
	if (rows.end > values.rows() || rows.begin > rows.end) {
		throw SizeError("windows: row range exceeds the data");
	}
	const std::size_t count = window_count(rows.size(), sampler);
	if (count == 0) {
		throw SizeError("windows: range of " + std::to_string(rows.size()) + " rows is shorter than lookback + horizon (" +
		                std::to_string(sampler.lookback + sampler.horizon) + ")");
	}
	std::vector<augment::SeriesWindow> out;
	out.reserve(count);
	for (std::size_t i = 0; i < count; ++i) {
		out.push_back(window_at(values, rows, sampler, i));
	}
	return out;
}

augment::SeriesWindow window_at(const Matrix& values, RowRange rows, const WindowSampler& sampler, std::size_t index) {
	const std::size_t start = rows.begin + index * sampler.stride;
	if (start + sampler.lookback + sampler.horizon > rows.end || rows.end > values.rows()) {
		throw SizeError("window_at: window " + std::to_string(index) + " runs past the row range");
	}
	const std::size_t dims = values.cols();
	const auto data = values.data();
	const auto first = data.begin() + static_cast<std::ptrdiff_t>(start * dims);
	const auto cut = first + static_cast<std::ptrdiff_t>(sampler.lookback * dims);
	const auto last = cut + static_cast<std::ptrdiff_t>(sampler.horizon * dims);
	return {Matrix(sampler.lookback, dims, std::vector<double>(first, cut)),
	        Matrix(sampler.horizon, dims, std::vector<double>(cut, last))};
}

RowRange window_range(const DatasetSplits& splits, Partition partition, const WindowSampler& sampler) {
	const std::size_t reach = sampler.lookback > 0 ? sampler.lookback - 1 : 0;
	switch (partition) {
	case Partition::Train: return splits.train;
	case Partition::Validation:
		return {splits.validation.begin - std::min(reach, splits.validation.begin), splits.validation.end};
	case Partition::Test: return {splits.test.begin - std::min(reach, splits.test.begin), splits.test.end};
	}
	return splits.train;
}

std::vector<augment::SeriesWindow> windows(const Matrix& values, const DatasetSplits& splits, Partition partition,
                                           const WindowSampler& sampler) {
	return windows(values, window_range(splits, partition, sampler), sampler);
}

nlohmann::json manifest(const RawDataset& dataset, const DatasetSplits& splits) {
	const auto range = [](RowRange r) { return nlohmann::json{{"begin", r.begin}, {"end", r.end}, {"rows", r.size()}}; };
	nlohmann::json variates = nlohmann::json::array();
	for (std::size_t d = 0; d < dataset.variates(); ++d) {
		variates.push_back({{"name", d < dataset.variate_names.size() ? dataset.variate_names[d] : std::to_string(d)},
		                    {"mean", splits.normalizer.mean()[d]},
		                    {"std", splits.normalizer.stddev()[d]}});
	}
	return {{"dataset", dataset.name},
	        {"rows", dataset.rows()},
	        {"train", range(splits.train)},
	        {"validation", range(splits.validation)},
	        {"test", range(splits.test)},
	        {"normalizer", variates}};
}

PreparedDataset prepare(const std::filesystem::path& path, SplitPolicy policy) {
	PreparedDataset out;
	out.raw = load_csv(path);
	out.splits = split(out.raw, policy);
	out.normalized = out.splits.normalizer.apply(out.raw.values);
	return out;
}

} // namespace dshuffle::data
