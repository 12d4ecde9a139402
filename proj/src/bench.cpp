#include "dshuffle/bench.hpp"

#include "dshuffle/batch.hpp"
#include "dshuffle/error.hpp"
#include "dshuffle/forecaster.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dshuffle::bench {

using augment::AugmentSpec;
using augment::Band;
using augment::Method;
using nlohmann::json;

namespace {

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
	if (!doc.is_object()) {
		throw ParameterError(where + ": expected a JSON object");
	}
	for (const auto& [key, value] : doc.items()) {
		if (!allowed.contains(key)) {
			throw ParameterError(where + ": unknown key '" + key + "'");
		}
	}
}

template <class T>
T get(const json& doc, const char* key, const std::string& where) {
	try {
		return doc.at(key).get<T>();
	} catch (const json::exception&) {
		throw ParameterError(where + ": key '" + key + "' has the wrong type");
	}
}

template <class T>
void read_if(const json& doc, const char* key, T& out, const std::string& where) {
	if (doc.contains(key)) {
		out = get<T>(doc, key, where);
	}
}

data::SplitPolicy parse_split(const json& v) {
	if (v.is_string()) {
		const auto s = v.get<std::string>();
		if (s == "auto") {
			return data::SplitPolicy::automatic();
		}
		std::size_t a = 0, b = 0, c = 0;
		char sep1 = 0, sep2 = 0;
		std::istringstream in(s);
		if (in >> a >> sep1 >> b >> sep2 >> c && sep1 == ':' && sep2 == ':' && in.peek() == EOF) {
			return data::SplitPolicy::ratio(a, b, c);
		}
		throw ParameterError("config.split: expected \"auto\" or \"a:b:c\", got '" + s + "'");
	}
	reject_unknown(v, {"counts", "ratio"}, "config.split");
	const bool counts = v.contains("counts");
	const auto parts = get<std::vector<std::size_t>>(v, counts ? "counts" : "ratio", "config.split");
	if (parts.size() != 3) {
		throw ParameterError("config.split: expected three numbers");
	}
	return counts ? data::SplitPolicy::counts(parts[0], parts[1], parts[2])
	              : data::SplitPolicy::ratio(parts[0], parts[1], parts[2]);
}

std::string format_double(double v) {
	// shortest representation that parses back to the same double
	char buf[32];
	const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
	return {buf, end};
}

std::string params_of(const AugmentSpec& spec) {
	std::ostringstream out;
	out << "band=" << augment::to_string(spec.effective_band());
	if (spec.effective_band() == Band::Dominant) {
		out << ";k=" << spec.k;
	}
	switch (spec.method) {
	case Method::FreqMask:
	case Method::FreqMix: out << ";mask_rate=" << spec.mask_rate; break;
	case Method::FreqNoise:
		out << ";sigma=" << spec.sigma
		    << (spec.noise_scale == augment::NoiseScale::Absolute ? ";absolute" : ";relative");
		break;
	case Method::FreqPool: out << ";pool_size=" << spec.pool_size; break;
	case Method::Upsample: out << ";factor=" << spec.upsample_factor; break;
	default: break;
	}
	if (!spec.per_variate_independent) {
		out << ";shared_permutation";
	}
	return out.str();
}

struct Cell {
	std::string sweep;
	std::string label;
	std::optional<AugmentSpec> spec;
	std::size_t horizon = 0;
	std::size_t multiplier = 1;
	std::uint64_t seed = 0;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& config) {
	std::vector<Cell> cells;
	for (std::size_t h : config.horizons) {
		for (std::uint64_t seed : config.seeds) {
			cells.push_back({"baseline", "none", std::nullopt, h, 1, seed});
		}
	}
	for (const auto& m : config.methods) {
		for (std::size_t mult : config.size_multipliers) {
			for (std::size_t h : config.horizons) {
				for (std::uint64_t seed : config.seeds) {
					AugmentSpec spec = m.spec;
					spec.seed = seed;
					cells.push_back({"methods", m.label, spec, h, mult, seed});
				}
			}
		}
	}
	for (std::size_t k : config.k_sweep) {
		for (std::size_t h : config.horizons) {
			for (std::uint64_t seed : config.seeds) {
				AugmentSpec spec;
				spec.method = Method::DominantShuffle;
				spec.k = k;
				spec.seed = seed;
				cells.push_back({"k_sweep", "dominant_shuffle", spec, h, 2, seed});
			}
		}
	}
	if (config.band_grid) {
		constexpr Band bands[] = {Band::Dominant, Band::Minor, Band::Full};
		constexpr Method ops[] = {Method::DominantShuffle, Method::FreqMask, Method::FreqNoise, Method::FreqRandom};
		for (Band band : bands) {
			for (Method op : ops) {
				for (std::size_t h : config.horizons) {
					for (std::uint64_t seed : config.seeds) {
						AugmentSpec spec;
						spec.method = op;
						spec.band = band;
						spec.k = config.band_grid_k;
						spec.minor_exclude = config.band_grid_k;
						spec.seed = seed;
						cells.push_back({"band_grid", std::string(augment::to_string(op)), spec, h, 2, seed});
					}
				}
			}
		}
	}
	if (config.auto_k) {
		for (std::size_t h : config.horizons) {
			for (std::uint64_t seed : config.seeds) {
				AugmentSpec spec;
				spec.method = Method::DominantShuffle;
				spec.seed = seed;
				cells.push_back({"auto_k", "dominant_shuffle", spec, h, 2, seed});
			}
		}
	}
	return cells;
}

// Train/validation/test row ranges of one horizon over the normalized data.
struct HorizonContext {
	const Matrix* values = nullptr;
	data::WindowSampler sampler;
	data::RowRange train;
	data::RowRange validation;
	data::RowRange test;

	std::size_t count(data::RowRange r) const { return data::window_count(r.size(), sampler); }

	forecast::WindowSource source(data::RowRange r) const {
		return [this, r](std::size_t i) { return data::window_at(*values, r, sampler, i); };
	}
};

forecast::LinearForecaster train(const HorizonContext& ctx, const std::optional<AugmentSpec>& spec,
                                 std::size_t multiplier, double lambda) {
	const std::size_t n = ctx.count(ctx.train);
	if (n == 0) {
		throw SizeError("training range too short for lookback + horizon");
	}
	const forecast::WindowSource originals = ctx.source(ctx.train);
	const auto lookback = ctx.sampler.lookback;
	const auto horizon = ctx.sampler.horizon;
	if (!spec || multiplier == 1) {
		return forecast::solve(forecast::accumulate(lookback, horizon, n, originals), lambda);
	}
	spec->validate();
	const AugmentSpec s = *spec;
	const forecast::WindowSource combined = [&originals, n, s](std::size_t i) -> augment::SeriesWindow {
		if (i < n) {
			return originals(i);
		}
		return augment::augment_copy(originals, n, i % n, i / n, s);
	};
	return forecast::solve(forecast::accumulate(lookback, horizon, n * multiplier, combined), lambda);
}

forecast::Metrics test_metrics(const HorizonContext& ctx, const forecast::LinearForecaster& model,
                               data::RowRange range) {
	const std::size_t n = ctx.count(range);
	if (n == 0) {
		throw SizeError("evaluation range too short for lookback + horizon");
	}
	return forecast::evaluate(model, n, ctx.source(range));
}

Record run_cell(const Cell& cell, const ExperimentConfig& config, const std::string& dataset,
                const HorizonContext& ctx) {
	Record r;
	r.sweep = cell.sweep;
	r.dataset = dataset;
	r.method = cell.label;
	r.horizon = cell.horizon;
	r.multiplier = cell.multiplier;
	r.seed = cell.seed;
	if (cell.spec) {
		r.band = std::string(augment::to_string(cell.spec->effective_band()));
		r.k = cell.spec->effective_band() == Band::Dominant ? cell.spec->k : 0;
		r.params = params_of(*cell.spec);
	}

	const auto start = std::chrono::steady_clock::now();
	try {
		if (cell.sweep == "auto_k") {
			if (config.k_sweep.empty()) {
				throw ParameterError("auto_k needs a non-empty k_sweep");
			}
			std::optional<forecast::LinearForecaster> best;
			double best_mse = 0.0;
			std::size_t best_k = 0;
			for (std::size_t k : config.k_sweep) {
				AugmentSpec spec = *cell.spec;
				spec.k = k;
				auto model = train(ctx, spec, cell.multiplier, config.ridge_lambda);
				const double mse = test_metrics(ctx, model, ctx.validation).mse;
				if (!best || mse < best_mse) {
					best = std::move(model);
					best_mse = mse;
					best_k = k;
				}
			}
			AugmentSpec chosen = *cell.spec;
			chosen.k = best_k;
			r.k = best_k;
			r.params = params_of(chosen) + ";validation_mse=" + format_double(best_mse);
			const auto m = test_metrics(ctx, *best, ctx.test);
			r.mse = m.mse;
			r.mae = m.mae;
		} else {
			const auto model = train(ctx, cell.spec, cell.multiplier, config.ridge_lambda);
			const auto m = test_metrics(ctx, model, ctx.test);
			r.mse = m.mse;
			r.mae = m.mae;
		}
	} catch (const std::exception& e) {
		r.status = "failed";
		r.error = e.what();
		r.mse.reset();
		r.mae.reset();
	}
	r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return r;
}

void validate(const ExperimentConfig& c) {
	if (c.lookback == 0) throw ParameterError("config: lookback must be positive");
	if (c.stride == 0) throw ParameterError("config: stride must be positive");
	if (c.horizons.empty()) throw ParameterError("config: horizons must not be empty");
	for (auto h : c.horizons) {
		if (h == 0) throw ParameterError("config: horizons must be positive");
	}
	if (c.seeds.empty()) throw ParameterError("config: seeds must not be empty");
	if (c.size_multipliers.empty()) throw ParameterError("config: size_multipliers must not be empty");
	for (auto m : c.size_multipliers) {
		if (m == 0) throw ParameterError("config: size multipliers must be at least 1");
	}
	for (auto k : c.k_sweep) {
		if (k == 0) throw ParameterError("config: k_sweep values must be at least 1");
	}
	if (c.workers == 0) throw ParameterError("config: workers must be at least 1");
	if (!(c.ridge_lambda >= 0.0)) throw ParameterError("config: ridge lambda must be >= 0");
	if (c.format != "csv" && c.format != "json") throw ParameterError("config: format must be csv or json");
	for (const auto& m : c.methods) {
		m.spec.validate();
	}
}

std::string csv_field(const std::string& s) {
	if (s.find_first_of(",\"\n") == std::string::npos) {
		return s;
	}
	std::string out = "\"";
	for (char ch : s) {
		if (ch == '"') out += '"';
		out += ch;
	}
	return out + "\"";
}

json optional_number(const std::optional<double>& v) {
	return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& v) {
	if (v.is_null()) {
		return std::nullopt;
	}
	return v.get<double>();
}

} // namespace

AugmentSpec spec_from_json(const json& doc) {
	const std::string where = "method spec";
	reject_unknown(doc,
	               {"method", "label", "k", "band", "minor_exclude", "mask_rate", "sigma", "noise_scale", "pool_size",
	                "upsample_factor", "per_variate_independent", "include_dc", "include_nyquist"},
	               where);
	AugmentSpec spec;
	spec.method = augment::parse_method(get<std::string>(doc, "method", where));
	read_if(doc, "k", spec.k, where);
	if (doc.contains("band")) {
		spec.band = augment::parse_band(get<std::string>(doc, "band", where));
	}
	read_if(doc, "minor_exclude", spec.minor_exclude, where);
	read_if(doc, "mask_rate", spec.mask_rate, where);
	read_if(doc, "sigma", spec.sigma, where);
	if (doc.contains("noise_scale")) {
		const auto scale = get<std::string>(doc, "noise_scale", where);
		if (scale == "relative") {
			spec.noise_scale = augment::NoiseScale::RelativeToMeanMagnitude;
		} else if (scale == "absolute") {
			spec.noise_scale = augment::NoiseScale::Absolute;
		} else {
			throw ParameterError(where + ": noise_scale must be relative or absolute");
		}
	}
	read_if(doc, "pool_size", spec.pool_size, where);
	read_if(doc, "upsample_factor", spec.upsample_factor, where);
	read_if(doc, "per_variate_independent", spec.per_variate_independent, where);
	read_if(doc, "include_dc", spec.candidates.include_dc, where);
	read_if(doc, "include_nyquist", spec.candidates.include_nyquist, where);
	spec.validate();
	return spec;
}

json spec_to_json(const AugmentSpec& spec) {
	json doc{{"method", augment::to_string(spec.method)},
	         {"k", spec.k},
	         {"minor_exclude", spec.minor_exclude},
	         {"mask_rate", spec.mask_rate},
	         {"sigma", spec.sigma},
	         {"noise_scale", spec.noise_scale == augment::NoiseScale::Absolute ? "absolute" : "relative"},
	         {"pool_size", spec.pool_size},
	         {"upsample_factor", spec.upsample_factor},
	         {"per_variate_independent", spec.per_variate_independent},
	         {"include_dc", spec.candidates.include_dc},
	         {"include_nyquist", spec.candidates.include_nyquist}};
	if (spec.band) {
		doc["band"] = augment::to_string(*spec.band);
	}
	return doc;
}

ExperimentConfig parse_config(const json& doc) {
	const std::string where = "config";
	reject_unknown(doc,
	               {"dataset", "split", "lookback", "stride", "horizons", "methods", "size_multipliers", "k_sweep",
	                "band_grid", "band_grid_k", "auto_k", "seeds", "model", "output", "format", "workers"},
	               where);
	ExperimentConfig c;
	if (doc.contains("dataset")) {
		c.dataset = get<std::string>(doc, "dataset", where);
	}
	if (doc.contains("split")) {
		c.split = parse_split(doc.at("split"));
	}
	read_if(doc, "lookback", c.lookback, where);
	read_if(doc, "stride", c.stride, where);
	read_if(doc, "horizons", c.horizons, where);
	if (doc.contains("methods")) {
		const json& methods = doc.at("methods");
		if (!methods.is_array()) {
			throw ParameterError("config: methods must be an array");
		}
		for (const json& m : methods) {
			MethodEntry entry;
			entry.spec = spec_from_json(m);
			entry.label = m.contains("label") ? get<std::string>(m, "label", "method spec")
			                                  : std::string(augment::to_string(entry.spec.method));
			c.methods.push_back(std::move(entry));
		}
	}
	read_if(doc, "size_multipliers", c.size_multipliers, where);
	read_if(doc, "k_sweep", c.k_sweep, where);
	read_if(doc, "band_grid", c.band_grid, where);
	read_if(doc, "band_grid_k", c.band_grid_k, where);
	read_if(doc, "auto_k", c.auto_k, where);
	read_if(doc, "seeds", c.seeds, where);
	if (doc.contains("model")) {
		const json& model = doc.at("model");
		reject_unknown(model, {"type", "lambda"}, "config.model");
		if (model.contains("type") && get<std::string>(model, "type", "config.model") != "ridge") {
			throw ParameterError("config.model: only type \"ridge\" is supported");
		}
		read_if(model, "lambda", c.ridge_lambda, "config.model");
	}
	if (doc.contains("output")) {
		c.output = get<std::string>(doc, "output", where);
	}
	read_if(doc, "format", c.format, where);
	read_if(doc, "workers", c.workers, where);
	validate(c);
	return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
	std::ifstream in(path);
	if (!in) {
		throw IoError("cannot open config '" + path.string() + "'");
	}
	json doc;
	try {
		in >> doc;
	} catch (const json::exception& e) {
		throw ParseError(std::string("config json: ") + e.what(), 1);
	}
	ExperimentConfig c = parse_config(doc);
	if (!c.dataset.empty() && c.dataset.is_relative()) {
		c.dataset = path.parent_path() / c.dataset;
	}
	return c;
}

std::size_t expected_records(const ExperimentConfig& c) {
	const std::size_t hs = c.horizons.size() * c.seeds.size();
	std::size_t total = hs;
	total += c.methods.size() * c.size_multipliers.size() * hs;
	total += c.k_sweep.size() * hs;
	if (c.band_grid) total += 12 * hs;
	if (c.auto_k) total += hs;
	return total;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
	validate(config);
	const data::PreparedDataset prepared = data::prepare(config.dataset, config.split);
	return run_experiment(config, prepared);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const data::PreparedDataset& prepared) {
	validate(config);
	std::map<std::size_t, HorizonContext> contexts;
	for (std::size_t h : config.horizons) {
		HorizonContext ctx;
		ctx.values = &prepared.normalized;
		ctx.sampler = {config.lookback, h, config.stride};
		ctx.train = data::window_range(prepared.splits, data::Partition::Train, ctx.sampler);
		ctx.validation = data::window_range(prepared.splits, data::Partition::Validation, ctx.sampler);
		ctx.test = data::window_range(prepared.splits, data::Partition::Test, ctx.sampler);
		contexts.emplace(h, ctx);
	}

	const std::vector<Cell> cells = enumerate_cells(config);
	ExperimentResult result;
	result.records.resize(cells.size());
	const auto jobs = static_cast<std::int64_t>(cells.size());
	if (config.workers > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(config.workers))
		for (std::int64_t i = 0; i < jobs; ++i) {
			const Cell& cell = cells[static_cast<std::size_t>(i)];
			result.records[static_cast<std::size_t>(i)] =
			    run_cell(cell, config, prepared.raw.name, contexts.at(cell.horizon));
		}
	} else {
		for (std::size_t i = 0; i < cells.size(); ++i) {
			result.records[i] = run_cell(cells[i], config, prepared.raw.name, contexts.at(cells[i].horizon));
		}
	}
	return result;
}

std::optional<double> ExperimentResult::baseline_mse(const std::string& dataset, std::size_t horizon) const {
	double sum = 0.0;
	std::size_t n = 0;
	for (const auto& r : records) {
		if (r.sweep == "baseline" && r.dataset == dataset && r.horizon == horizon && r.mse) {
			sum += *r.mse;
			++n;
		}
	}
	if (n == 0) {
		return std::nullopt;
	}
	return sum / static_cast<double>(n);
}

std::optional<double> ExperimentResult::relative_improvement(const Record& record) const {
	const auto base = baseline_mse(record.dataset, record.horizon);
	if (!base || !record.mse || *base == 0.0) {
		return std::nullopt;
	}
	return (*base - *record.mse) / *base;
}

std::vector<SummaryRow> ExperimentResult::summary() const {
	std::vector<SummaryRow> rows;
	std::vector<std::vector<const Record*>> members;
	std::map<std::tuple<std::string, std::string, std::string, std::size_t, std::string, std::size_t, std::size_t>,
	         std::size_t>
	    index;
	for (const auto& r : records) {
		if (!r.mse) {
			continue;
		}
		// auto_k params carry the chosen k per seed; group those by method only
		const std::string params = r.sweep == "auto_k" ? "" : r.params;
		const std::size_t k = r.sweep == "auto_k" ? 0 : r.k;
		const auto key = std::make_tuple(r.sweep, r.method, r.band, k, params, r.horizon, r.multiplier);
		auto [it, inserted] = index.emplace(key, rows.size());
		if (inserted) {
			rows.push_back({r.sweep, r.method, r.band, k, params, r.horizon, r.multiplier, 0, 0.0, 0.0, 0.0, 0.0, std::nullopt});
			members.emplace_back();
		}
		members[it->second].push_back(&r);
	}
	for (std::size_t g = 0; g < rows.size(); ++g) {
		const auto& group = members[g];
		const auto n = static_cast<double>(group.size());
		double mse = 0.0;
		double mae = 0.0;
		for (const Record* r : group) {
			mse += *r->mse;
			mae += *r->mae;
		}
		mse /= n;
		mae /= n;
		double mse_var = 0.0;
		double mae_var = 0.0;
		for (const Record* r : group) {
			mse_var += (*r->mse - mse) * (*r->mse - mse);
			mae_var += (*r->mae - mae) * (*r->mae - mae);
		}
		auto& row = rows[g];
		row.runs = group.size();
		row.mse_mean = mse;
		row.mae_mean = mae;
		row.mse_std = group.size() > 1 ? std::sqrt(mse_var / (n - 1)) : 0.0;
		row.mae_std = group.size() > 1 ? std::sqrt(mae_var / (n - 1)) : 0.0;
		if (const auto base = baseline_mse(group.front()->dataset, row.horizon); base && *base != 0.0) {
			row.relative_improvement = (*base - mse) / *base;
		}
	}
	return rows;
}

std::string to_csv(const ExperimentResult& result) {
	std::ostringstream out;
	out << kCsvHeader << '\n';
	for (const auto& r : result.records) {
		const auto rel = result.relative_improvement(r);
		out << csv_field(r.sweep) << ',' << csv_field(r.dataset) << ',' << csv_field(r.method) << ','
		    << csv_field(r.band) << ',' << r.k << ',' << csv_field(r.params) << ',' << r.horizon << ','
		    << r.multiplier << ',' << r.seed << ',' << (r.mse ? format_double(*r.mse) : "") << ','
		    << (r.mae ? format_double(*r.mae) : "") << ',' << (rel ? format_double(*rel) : "") << ','
		    << format_double(r.wall_time) << ',' << r.status << ',' << csv_field(r.error) << '\n';
	}
	return out.str();
}

json to_json(const ExperimentResult& result) {
	json records = json::array();
	for (const auto& r : result.records) {
		records.push_back({{"sweep", r.sweep},
		                   {"dataset", r.dataset},
		                   {"method", r.method},
		                   {"band", r.band},
		                   {"k", r.k},
		                   {"params", r.params},
		                   {"horizon", r.horizon},
		                   {"multiplier", r.multiplier},
		                   {"seed", r.seed},
		                   {"mse", optional_number(r.mse)},
		                   {"mae", optional_number(r.mae)},
		                   {"relative_improvement", optional_number(result.relative_improvement(r))},
		                   {"wall_time_s", r.wall_time},
		                   {"status", r.status},
		                   {"error", r.error}});
	}
	json summary = json::array();
	for (const auto& s : result.summary()) {
		summary.push_back({{"sweep", s.sweep},
		                   {"method", s.method},
		                   {"band", s.band},
		                   {"k", s.k},
		                   {"params", s.params},
		                   {"horizon", s.horizon},
		                   {"multiplier", s.multiplier},
		                   {"runs", s.runs},
		                   {"mse_mean", s.mse_mean},
		                   {"mse_std", s.mse_std},
		                   {"mae_mean", s.mae_mean},
		                   {"mae_std", s.mae_std},
		                   {"relative_improvement", optional_number(s.relative_improvement)}});
	}
	return {{"records", records}, {"summary", summary}};
}

ExperimentResult result_from_json(const json& doc) {
	ExperimentResult result;
	try {
		for (const json& j : doc.at("records")) {
			Record r;
			r.sweep = j.at("sweep").get<std::string>();
			r.dataset = j.at("dataset").get<std::string>();
			r.method = j.at("method").get<std::string>();
			r.band = j.at("band").get<std::string>();
			r.k = j.at("k").get<std::size_t>();
			r.params = j.at("params").get<std::string>();
			r.horizon = j.at("horizon").get<std::size_t>();
			r.multiplier = j.at("multiplier").get<std::size_t>();
			r.seed = j.at("seed").get<std::uint64_t>();
			r.mse = read_optional(j.at("mse"));
			r.mae = read_optional(j.at("mae"));
			r.wall_time = j.at("wall_time_s").get<double>();
			r.status = j.at("status").get<std::string>();
			r.error = j.at("error").get<std::string>();
			result.records.push_back(std::move(r));
		}
	} catch (const json::exception& e) {
		throw ParseError(std::string("result json: ") + e.what(), 1);
	}
	return result;
}

void emit_results(const ExperimentResult& result, const std::filesystem::path& path, const std::string& format) {
	if (format != "csv" && format != "json") {
		throw ParameterError("emit_results: format must be csv or json");
	}
	std::ofstream out(path);
	if (!out) {
		throw IoError("cannot write results to '" + path.string() + "'");
	}
	if (format == "csv") {
		out << to_csv(result);
	} else {
		out << to_json(result).dump(2) << '\n';
	}
	out.flush();
	if (!out) {
		throw IoError("write failed for '" + path.string() + "'");
	}
}

} // namespace dshuffle::bench
