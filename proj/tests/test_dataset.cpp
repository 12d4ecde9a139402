#include <catch2/catch_amalgamated.hpp>

#include "dshuffle/dataset.hpp"
#include "dshuffle/error.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace dshuffle;
using namespace dshuffle::data;

namespace {

std::string synthetic_csv(std::size_t rows, std::size_t variates, std::uint64_t seed) {
	std::mt19937_64 gen(seed);
	std::normal_distribution<double> noise(0.0, 1.0);
	std::ostringstream out;
	out << "date";
	for (std::size_t d = 0; d < variates; ++d) out << ",v" << d;
	out << '\n';
	out.precision(17);
	for (std::size_t r = 0; r < rows; ++r) {
		out << "t" << r;
		for (std::size_t d = 0; d < variates; ++d) out << ',' << noise(gen) + static_cast<double>(d);
		out << '\n';
	}
	return out.str();
}

RawDataset synthetic(std::string name, std::size_t rows, std::size_t variates, std::uint64_t seed = 1) {
	std::istringstream in(synthetic_csv(rows, variates, seed));
	return parse_csv(in, std::move(name));
}

RawDataset ramp(std::size_t rows) {
	std::ostringstream text;
	text << "date,a,b\n";
	for (std::size_t r = 0; r < rows; ++r) text << r << ',' << r << ',' << 100 + 2 * r << '\n';
	std::istringstream in(text.str());
	return parse_csv(in, "ramp");
}

struct TempFile {
	std::filesystem::path path;
	TempFile(const std::string& name, const std::string& content)
	    : path(std::filesystem::temp_directory_path() / name) {
		std::ofstream(path) << content;
	}
	~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("parse a toy csv", "[dataset][csv]") {
	std::istringstream in("date,HUFL,OT\n2016-07-01 00:00:00,5.827,30.531\n2016-07-01 01:00:00,5.693,27.787\n"
	                      "2016-07-01 02:00:00,-1e-3,27.787\n");
	const auto raw = parse_csv(in, "toy");
	CHECK(raw.name == "toy");
	CHECK(raw.rows() == 3);
	CHECK(raw.variates() == 2);
	CHECK(raw.variate_names == std::vector<std::string>{"HUFL", "OT"});
	CHECK(raw.timestamps[1] == "2016-07-01 01:00:00");
	CHECK(raw.values(0, 0) == 5.827);
	CHECK(raw.values(2, 0) == -1e-3);
	CHECK(raw.values(1, 1) == 27.787);
}

TEST_CASE("csv errors name their location", "[dataset][csv][errors]") {
	{
		std::istringstream in("date,a,b\nt0,1,2\nt1,,3\n");
		try {
			parse_csv(in, "x");
			FAIL("expected DataError");
		} catch (const DataError& e) {
			const std::string what = e.what();
			CHECK(what.find("line 3") != std::string::npos);
			CHECK(what.find("'a'") != std::string::npos);
		}
	}
	{
		std::istringstream in("date,a,b\nt0,1,2\nt1,1.5x,3\n");
		try {
			parse_csv(in, "x");
			FAIL("expected ParseError");
		} catch (const ParseError& e) {
			CHECK(e.line() == 3);
		}
	}
	{
		std::istringstream in("date,a,b\nt0,1,2\nt1,3\n");
		try {
			parse_csv(in, "x");
			FAIL("expected ParseError");
		} catch (const ParseError& e) {
			CHECK(e.line() == 3);
		}
	}
	std::istringstream nan_cell("date,a\nt0,nan\n");
	CHECK_THROWS_AS(parse_csv(nan_cell, "x"), DataError);
	std::istringstream empty("");
	CHECK_THROWS_AS(parse_csv(empty, "x"), ParseError);
	std::istringstream header_only("date,a\n");
	const auto no_rows = parse_csv(header_only, "x");
	CHECK(no_rows.rows() == 0);
	CHECK_THROWS_AS(split(no_rows, SplitPolicy::ratio(6, 2, 2)), SizeError);
	std::istringstream no_variates("date\nt0\n");
	CHECK_THROWS_AS(parse_csv(no_variates, "x"), ParseError);
	CHECK_THROWS_AS(load_csv("/nonexistent/dir/ETTh1.csv"), IoError);
}

TEST_CASE("crlf line endings and load_csv naming", "[dataset][csv]") {
	TempFile file("dshuffle_test_crlf.csv", "date,a,b\r\nt0,1,2\r\nt1,3,4\r\n");
	const auto raw = load_csv(file.path);
	CHECK(raw.name == "dshuffle_test_crlf");
	CHECK(raw.rows() == 2);
	CHECK(raw.values(1, 1) == 4.0);
}

TEST_CASE("benchmark split counts", "[dataset][split]") {
	const auto etth1 = split(synthetic("ETTh1", 17420, 7), SplitPolicy::automatic());
	CHECK(etth1.train == RowRange{0, 8545});
	CHECK(etth1.validation == RowRange{8545, 8545 + 2881});
	CHECK(etth1.test == RowRange{8545 + 2881, 8545 + 2 * 2881});

	const auto ettm1 = split(synthetic("ETTm1", 69680, 2), SplitPolicy::automatic());
	CHECK(ettm1.train.size() == 34465);
	CHECK(ettm1.validation.size() == 11521);
	CHECK(ettm1.test.size() == 11521);

	CHECK(benchmark_counts("etth2").has_value());
	CHECK(benchmark_counts("Weather").has_value());
	CHECK_FALSE(benchmark_counts("mystery").has_value());
	const auto ett = benchmark_ratio("ETTm2");
	CHECK((ett.train == 6 && ett.validation == 2 && ett.test == 2));
	const auto other = benchmark_ratio("traffic");
	CHECK((other.train == 7 && other.validation == 1 && other.test == 2));

	// a named benchmark with too few rows for its counts
	CHECK_THROWS_AS(split(synthetic("ETTh1", 1000, 2), SplitPolicy::automatic()), SizeError);
}

TEST_CASE("ratio and explicit splits", "[dataset][split]") {
	const auto raw = synthetic("generic", 100, 2);
	const auto s = split(raw, SplitPolicy::ratio(6, 2, 2));
	CHECK(s.train == RowRange{0, 60});
	CHECK(s.validation == RowRange{60, 80});
	CHECK(s.test == RowRange{80, 100});

	// floors for validation and test, remainder to train
	const auto odd = split(synthetic("generic", 103, 2), SplitPolicy::ratio(7, 1, 2));
	CHECK(odd.validation.size() == 10);
	CHECK(odd.test.size() == 20);
	CHECK(odd.train.size() == 73);

	const auto automatic = split(raw, SplitPolicy::automatic());
	CHECK(automatic.train.size() == 70);
	CHECK(automatic.validation.size() == 10);
	CHECK(automatic.test.size() == 20);

	const auto counts = split(raw, SplitPolicy::counts(50, 10, 30));
	CHECK(counts.test == RowRange{60, 90});
	CHECK_THROWS_AS(split(raw, SplitPolicy::counts(50, 30, 30)), SizeError);
	CHECK_THROWS_AS(split(raw, SplitPolicy::counts(50, 0, 30)), SizeError);
	CHECK_THROWS_AS(split(synthetic("tiny", 4, 1), SplitPolicy::ratio(6, 2, 2)), SizeError);
	CHECK_THROWS_AS(split(raw, SplitPolicy::ratio(0, 0, 0)), ParameterError);
}

TEST_CASE("constant variates are rejected", "[dataset][split][errors]") {
	std::istringstream in("date,a,b\nt0,1,5\nt1,2,5\nt2,3,5\nt3,4,5\nt4,5,5\nt5,6,5\nt6,7,5\nt7,8,5\nt8,9,5\nt9,1,5\n");
	const auto raw = parse_csv(in, "flat");
	try {
		split(raw, SplitPolicy::ratio(6, 2, 2));
		FAIL("expected DataError");
	} catch (const DataError& e) {
		CHECK(std::string(e.what()).find("'b'") != std::string::npos);
	}
}

TEST_CASE("normalizer", "[dataset][normalize]") {
	const auto raw = synthetic("generic", 500, 4, 3);
	const auto s = split(raw, SplitPolicy::ratio(6, 2, 2));
	const Matrix z = s.normalizer.apply(raw.values);
	const Matrix back = s.normalizer.invert(z);
	for (std::size_t i = 0; i < back.data().size(); ++i) {
		CHECK(std::abs(back.data()[i] - raw.values.data()[i]) < 1e-12);
	}
	for (std::size_t d = 0; d < 4; ++d) {
		double mean = 0.0;
		for (std::size_t r = s.train.begin; r < s.train.end; ++r) mean += z(r, d);
		mean /= static_cast<double>(s.train.size());
		double var = 0.0;
		for (std::size_t r = s.train.begin; r < s.train.end; ++r) var += (z(r, d) - mean) * (z(r, d) - mean);
		var /= static_cast<double>(s.train.size());
		CHECK(std::abs(mean) < 1e-10);
		CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-10);
	}

	// mutating validation and test rows leaves the fitted statistics unchanged
	RawDataset mutated = raw;
	for (std::size_t r = s.validation.begin; r < mutated.rows(); ++r) {
		for (std::size_t d = 0; d < 4; ++d) mutated.values(r, d) = 1e6 * static_cast<double>(r + d);
	}
	CHECK(split(mutated, SplitPolicy::ratio(6, 2, 2)).normalizer == s.normalizer);

	CHECK_THROWS_AS(Normalizer({0.0, 1.0}, {1.0, 0.0}), DataError);
	CHECK_THROWS_AS(Normalizer({0.0}, {1.0, 1.0}), SizeError);
	CHECK_THROWS_AS(s.normalizer.apply(Matrix(3, 2)), SizeError);
}

TEST_CASE("window counts and contents", "[dataset][windows]") {
	CHECK(window_count(10, {3, 2, 1}) == 6);
	CHECK(window_count(10, {3, 2, 2}) == 3);
	CHECK(window_count(4, {3, 2, 1}) == 0);
	CHECK(window_count(8545, {96, 96, 1}) == 8354);
	for (std::size_t rows = 1; rows < 40; ++rows) {
		for (std::size_t stride = 1; stride < 5; ++stride) {
			const WindowSampler sampler{4, 3, stride};
			std::size_t brute = 0;
			for (std::size_t s = 0; s + 7 <= rows; s += stride) ++brute;
			CHECK(window_count(rows, sampler) == brute);
		}
	}

	const auto raw = ramp(10);
	const auto all = windows(raw.values, RowRange{0, 10}, {3, 2, 1});
	REQUIRE(all.size() == 6);
	CHECK(all[0].history.column(0) == std::vector<double>{0, 1, 2});
	CHECK(all[0].future.column(0) == std::vector<double>{3, 4});
	CHECK(all[5].future.column(1) == std::vector<double>{116, 118});
	for (std::size_t i = 0; i < all.size(); ++i) {
		CHECK(window_at(raw.values, RowRange{0, 10}, {3, 2, 1}, i) == all[i]);
	}
	const auto strided = windows(raw.values, RowRange{2, 10}, {3, 2, 2});
	REQUIRE(strided.size() == 2);
	CHECK(strided[1].history.column(0) == std::vector<double>{4, 5, 6});

	CHECK_THROWS_AS(windows(raw.values, RowRange{0, 4}, {3, 2, 1}), SizeError);
	CHECK_THROWS_AS(windows(raw.values, RowRange{0, 10}, {0, 2, 1}), ParameterError);
	CHECK_THROWS_AS(windows(raw.values, RowRange{0, 10}, {3, 2, 0}), ParameterError);
	CHECK_THROWS_AS(window_at(raw.values, RowRange{0, 10}, {3, 2, 1}, 6), SizeError);
}

TEST_CASE("partitions do not leak labels", "[dataset][windows]") {
	const auto raw = ramp(300);
	const auto s = split(raw, SplitPolicy::ratio(6, 2, 2));
	const WindowSampler sampler{24, 12, 1};

	const auto train = windows(raw.values, s, Partition::Train, sampler);
	CHECK(train.size() == window_count(s.train.size(), sampler));
	// the ramp value equals the row index
	CHECK(train.back().future(11, 0) < static_cast<double>(s.validation.begin));

	const auto validation = windows(raw.values, s, Partition::Validation, sampler);
	CHECK(validation.front().history(0, 0) == static_cast<double>(s.validation.begin - 23));
	CHECK(validation.front().future(0, 0) >= static_cast<double>(s.validation.begin));
	CHECK(validation.back().future(11, 0) == static_cast<double>(s.validation.end - 1));

	const auto test = windows(raw.values, s, Partition::Test, sampler);
	CHECK(test.front().future(0, 0) >= static_cast<double>(s.test.begin));
	CHECK(test.back().future(11, 0) == static_cast<double>(s.test.end - 1));
	CHECK(window_range(s, Partition::Test, sampler) == RowRange{s.test.begin - 23, s.test.end});
}

TEST_CASE("reloading is deterministic and emits a manifest", "[dataset]") {
	TempFile file("sensors.csv", synthetic_csv(400, 3, 9));
	const auto a = prepare(file.path);
	const auto b = prepare(file.path);
	CHECK(a.normalized == b.normalized);
	CHECK(a.splits.normalizer == b.splits.normalizer);
	const auto m = manifest(a.raw, a.splits);
	CHECK(m.dump() == manifest(b.raw, b.splits).dump());
	CHECK(m["dataset"] == "sensors");
	CHECK(m["train"]["rows"] == 280);
	CHECK(m["validation"]["rows"] == 40);
	CHECK(m["test"]["rows"] == 80);
	CHECK(m["normalizer"].size() == 3);
}
