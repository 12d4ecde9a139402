// Eigen must not spawn its own threads: summation order has to stay fixed.
#define EIGEN_DONT_PARALLELIZE

#include "dshuffle/forecaster.hpp"

#include "dshuffle/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <exception>
#include <fstream>
#include <string>

namespace dshuffle::forecast {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// windows per rank update inside a chunk
constexpr std::size_t kBatch = 64;

void check_window(const augment::SeriesWindow& w, std::size_t lookback, std::size_t horizon) {
	if (w.lookback() != lookback || w.horizon() != horizon) {
		throw SizeError("forecaster: window shape (" + std::to_string(w.lookback()) + ", " +
		                std::to_string(w.horizon()) + ") does not match model (" + std::to_string(lookback) + ", " +
		                std::to_string(horizon) + ")");
	}
}

NormalEquations accumulate_range(std::size_t lookback, std::size_t horizon, std::size_t begin, std::size_t end,
                                 const WindowSource& source) {
	const auto dim = static_cast<Eigen::Index>(lookback + 1);
	const auto steps = static_cast<Eigen::Index>(horizon);
	Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
	Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(dim, steps);
	std::size_t samples = 0;

	Eigen::MatrixXd z;
	Eigen::MatrixXd y;
	for (std::size_t first = begin; first < end; first += kBatch) {
		const std::size_t last = std::min(end, first + kBatch);
		std::vector<augment::SeriesWindow> batch;
		batch.reserve(last - first);
		std::size_t columns = 0;
		for (std::size_t i = first; i < last; ++i) {
			batch.push_back(source(i));
			check_window(batch.back(), lookback, horizon);
			columns += batch.back().variates();
		}
		z.resize(dim, static_cast<Eigen::Index>(columns));
		y.resize(steps, static_cast<Eigen::Index>(columns));
		Eigen::Index col = 0;
		for (const auto& w : batch) {
			for (std::size_t d = 0; d < w.variates(); ++d, ++col) {
				for (std::size_t l = 0; l < lookback; ++l) {
					z(static_cast<Eigen::Index>(l), col) = w.history(l, d);
				}
				z(dim - 1, col) = 1.0;
				for (std::size_t t = 0; t < horizon; ++t) {
					y(static_cast<Eigen::Index>(t), col) = w.future(t, d);
				}
			}
		}
		gram.selfadjointView<Eigen::Upper>().rankUpdate(z);
		cross.noalias() += z * y.transpose();
		samples += columns;
	}
	gram.triangularView<Eigen::StrictlyLower>() = gram.transpose();

	NormalEquations out(lookback, horizon);
	Eigen::Map<RowMajor>(out.gram.data(), dim, dim) = gram;
	Eigen::Map<RowMajor>(out.cross.data(), dim, steps) = cross;
	out.samples = samples;
	return out;
}

std::size_t chunk_begin(std::size_t chunk, std::size_t chunks, std::size_t count) {
	return chunk * count / chunks;
}

NormalEquations tree_reduce(std::vector<NormalEquations> partials) {
	for (std::size_t width = 1; width < partials.size(); width *= 2) {
		for (std::size_t i = 0; i + width < partials.size(); i += 2 * width) {
			partials[i].merge(partials[i + width]);
		}
	}
	return std::move(partials.front());
}

} // namespace

LinearForecaster::LinearForecaster(std::size_t lookback, std::size_t horizon)
    : lookback_(lookback), horizon_(horizon), weights_(lookback * horizon, 0.0), bias_(horizon, 0.0) {}

LinearForecaster::LinearForecaster(std::size_t lookback, std::size_t horizon, std::vector<double> weights,
                                   std::vector<double> bias)
    : lookback_(lookback), horizon_(horizon), weights_(std::move(weights)), bias_(std::move(bias)) {
	if (weights_.size() != lookback_ * horizon_ || bias_.size() != horizon_) {
		throw SizeError("forecaster: parameter lengths do not match (lookback, horizon)");
	}
	for (double v : weights_) {
		if (!std::isfinite(v)) throw InvalidInputError("forecaster: non-finite weight");
	}
	for (double v : bias_) {
		if (!std::isfinite(v)) throw InvalidInputError("forecaster: non-finite bias");
	}
}

std::vector<double> LinearForecaster::predict(std::span<const double> history) const {
	if (history.size() != lookback_) {
		throw SizeError("predict: history length " + std::to_string(history.size()) + " != lookback " +
		                std::to_string(lookback_));
	}
	std::vector<double> out(bias_);
	for (std::size_t t = 0; t < horizon_; ++t) {
		double acc = 0.0;
		const double* row = weights_.data() + t * lookback_;
		for (std::size_t l = 0; l < lookback_; ++l) {
			acc += row[l] * history[l];
		}
		out[t] += acc;
	}
	return out;
}

Matrix LinearForecaster::predict(const Matrix& history) const {
	if (history.rows() != lookback_) {
		throw SizeError("predict: history has " + std::to_string(history.rows()) + " rows, lookback is " +
		                std::to_string(lookback_));
	}
	Matrix out(horizon_, history.cols());
	for (std::size_t d = 0; d < history.cols(); ++d) {
		const std::vector<double> forecast = predict(history.column(d));
		for (std::size_t t = 0; t < horizon_; ++t) {
			out(t, d) = forecast[t];
		}
	}
	return out;
}

NormalEquations::NormalEquations(std::size_t lookback_, std::size_t horizon_)
    : lookback(lookback_), horizon(horizon_), gram((lookback_ + 1) * (lookback_ + 1), 0.0),
      cross((lookback_ + 1) * horizon_, 0.0) {}

void NormalEquations::merge(const NormalEquations& other) {
	if (other.lookback != lookback || other.horizon != horizon) {
		throw SizeError("normal equations: cannot merge different shapes");
	}
	for (std::size_t i = 0; i < gram.size(); ++i) {
		gram[i] += other.gram[i];
	}
	for (std::size_t i = 0; i < cross.size(); ++i) {
		cross[i] += other.cross[i];
	}
	samples += other.samples;
}

NormalEquations accumulate(std::size_t lookback, std::size_t horizon, std::size_t count, const WindowSource& source) {
	if (count == 0) {
		return NormalEquations(lookback, horizon);
	}
	const std::size_t chunks = std::min(kReductionChunks, count);
	std::vector<NormalEquations> partials(chunks);
	std::vector<std::exception_ptr> errors(chunks);
#pragma omp parallel for schedule(dynamic, 1)
	for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
		const auto chunk = static_cast<std::size_t>(c);
		try {
			partials[chunk] = accumulate_range(lookback, horizon, chunk_begin(chunk, chunks, count),
			                                   chunk_begin(chunk + 1, chunks, count), source);
		} catch (...) {
			errors[chunk] = std::current_exception();
		}
	}
	for (const auto& e : errors) {
		if (e) {
			std::rethrow_exception(e);
		}
	}
	return tree_reduce(std::move(partials));
}

NormalEquations accumulate(std::span<const augment::SeriesWindow> windows) {
	if (windows.empty()) {
		throw SizeError("accumulate: no training windows");
	}
	return accumulate(windows.front().lookback(), windows.front().horizon(), windows.size(),
	                  [windows](std::size_t i) { return windows[i]; });
}

namespace serial {

NormalEquations accumulate(std::size_t lookback, std::size_t horizon, std::size_t count, const WindowSource& source) {
	if (count == 0) {
		return NormalEquations(lookback, horizon);
	}
	const std::size_t chunks = std::min(kReductionChunks, count);
	std::vector<NormalEquations> partials;
	partials.reserve(chunks);
	for (std::size_t chunk = 0; chunk < chunks; ++chunk) {
		partials.push_back(accumulate_range(lookback, horizon, chunk_begin(chunk, chunks, count),
		                                    chunk_begin(chunk + 1, chunks, count), source));
	}
	return tree_reduce(std::move(partials));
}

} // namespace serial

LinearForecaster solve(const NormalEquations& system, double lambda) {
	if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
		throw ParameterError("fit_ridge: lambda must be finite and >= 0");
	}
	if (system.samples == 0) {
		throw SizeError("fit_ridge: no training samples");
	}
	const std::size_t lookback = system.lookback;
	const std::size_t horizon = system.horizon;
	const auto dim = static_cast<Eigen::Index>(lookback + 1);
	const auto steps = static_cast<Eigen::Index>(horizon);

	Eigen::MatrixXd a = Eigen::Map<const RowMajor>(system.gram.data(), dim, dim);
	const Eigen::MatrixXd b = Eigen::Map<const RowMajor>(system.cross.data(), dim, steps);
	for (Eigen::Index i = 0; i + 1 < dim; ++i) {
		a(i, i) += lambda;
	}

	const Eigen::LDLT<Eigen::MatrixXd> factor(a);
	// rcond() is an estimate that can miss exact rank deficiency; the pivot
	// ratio of D catches it
	const double rcond = factor.info() == Eigen::Success ? factor.rcond() : 0.0;
	const auto pivots = factor.vectorD();
	const double pivot_ratio = pivots.maxCoeff() > 0.0 ? pivots.minCoeff() / pivots.maxCoeff() : 0.0;
	if (!(rcond > 1e-13) || !(pivot_ratio > 1e-13) || !factor.isPositive()) {
		throw NumericError("fit_ridge: normal equations are singular (rcond " + std::to_string(rcond) +
		                   "); use lambda > 0");
	}
	const Eigen::MatrixXd solution = factor.solve(b); // (L+1) x T
	if (!solution.allFinite()) {
		throw NumericError("fit_ridge: non-finite solution; use lambda > 0");
	}

	std::vector<double> weights(lookback * horizon);
	std::vector<double> bias(horizon);
	for (std::size_t t = 0; t < horizon; ++t) {
		for (std::size_t l = 0; l < lookback; ++l) {
			weights[t * lookback + l] = solution(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(t));
		}
		bias[t] = solution(dim - 1, static_cast<Eigen::Index>(t));
	}
	return LinearForecaster(lookback, horizon, std::move(weights), std::move(bias));
}

LinearForecaster fit_ridge(std::span<const augment::SeriesWindow> windows, double lambda) {
	return solve(accumulate(windows), lambda);
}

Metrics evaluate(const LinearForecaster& model, std::span<const augment::SeriesWindow> windows) {
	return evaluate(model, windows.size(), [windows](std::size_t i) { return windows[i]; });
}

Metrics evaluate(const LinearForecaster& model, std::size_t count, const WindowSource& source) {
	Metrics out;
	double squared = 0.0;
	double absolute = 0.0;
	std::size_t terms = 0;
	for (std::size_t i = 0; i < count; ++i) {
		const augment::SeriesWindow w = source(i);
		check_window(w, model.lookback(), model.horizon());
		const Matrix forecast = model.predict(w.history);
		for (std::size_t t = 0; t < w.horizon(); ++t) {
			for (std::size_t d = 0; d < w.variates(); ++d) {
				const double err = forecast(t, d) - w.future(t, d);
				squared += err * err;
				absolute += std::abs(err);
			}
		}
		terms += w.horizon() * w.variates();
	}
	out.count = count;
	if (terms > 0) {
		out.mse = squared / static_cast<double>(terms);
		out.mae = absolute / static_cast<double>(terms);
	}
	return out;
}

nlohmann::json to_json(const LinearForecaster& model) {
	return {{"format", "dshuffle.linear"},
	        {"shape", {model.horizon(), model.lookback()}},
	        {"weights", model.weights()},
	        {"bias", model.bias()}};
}

LinearForecaster from_json(const nlohmann::json& doc) {
	try {
		if (doc.at("format").get<std::string>() != "dshuffle.linear") {
			throw ParseError("unknown model format", 1);
		}
		const auto shape = doc.at("shape").get<std::vector<std::size_t>>();
		if (shape.size() != 2) {
			throw ParseError("model shape must be [horizon, lookback]", 1);
		}
		return LinearForecaster(shape[1], shape[0], doc.at("weights").get<std::vector<double>>(),
		                        doc.at("bias").get<std::vector<double>>());
	} catch (const nlohmann::json::exception& e) {
		throw ParseError(std::string("model json: ") + e.what(), 1);
	} catch (const SizeError& e) {
		throw ParseError(std::string("model json: ") + e.what(), 1);
	}
}

void save(const LinearForecaster& model, const std::filesystem::path& path) {
	std::ofstream out(path);
	if (!out) {
		throw IoError("cannot write '" + path.string() + "'");
	}
	out << to_json(model).dump() << '\n';
	if (!out) {
		throw IoError("write failed for '" + path.string() + "'");
	}
}

LinearForecaster load(const std::filesystem::path& path) {
	std::ifstream in(path);
	if (!in) {
		throw IoError("cannot open '" + path.string() + "'");
	}
	nlohmann::json doc;
	try {
		in >> doc;
	} catch (const nlohmann::json::exception& e) {
		throw ParseError(std::string("model json: ") + e.what(), 1);
	} catch (const SizeError& e) {
		throw ParseError(std::string("model json: ") + e.what(), 1);
	}
	return from_json(doc);
}

} // namespace dshuffle::forecast
