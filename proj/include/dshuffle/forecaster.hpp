#pragma once

#include "dshuffle/batch.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

namespace dshuffle::forecast {

// Direct multi-horizon linear map shared by all variates:
//   y_hat[t] = sum_l weights(t, l) * x[l] + bias[t]
class LinearForecaster {
public:
	LinearForecaster() = default;
	// Zero model.
	LinearForecaster(std::size_t lookback, std::size_t horizon);
	LinearForecaster(std::size_t lookback, std::size_t horizon, std::vector<double> weights, std::vector<double> bias);

	std::size_t lookback() const noexcept { return lookback_; }
	std::size_t horizon() const noexcept { return horizon_; }

	// T x L, row-major
	const std::vector<double>& weights() const noexcept { return weights_; }
	const std::vector<double>& bias() const noexcept { return bias_; }
	double weight(std::size_t step, std::size_t lag) const { return weights_[step * lookback_ + lag]; }

	// One variate's history (length L) to its forecast (length T).
	std::vector<double> predict(std::span<const double> history) const;

	// L x D history to T x D forecast, variate by variate.
	Matrix predict(const Matrix& history) const;

	friend bool operator==(const LinearForecaster&, const LinearForecaster&) = default;

private:
	std::size_t lookback_ = 0;
	std::size_t horizon_ = 0;
	std::vector<double> weights_;
	std::vector<double> bias_;
};

// Sufficient statistics of the channel-independent least-squares problem with
// regressor z = [x; 1]: gram = sum z z^T, cross = sum z y^T.
struct NormalEquations {
	std::size_t lookback = 0;
	std::size_t horizon = 0;
	std::vector<double> gram;  // (L+1) x (L+1), row-major
	std::vector<double> cross; // (L+1) x T, row-major
	std::size_t samples = 0;   // (window, variate) pairs

	NormalEquations() = default;
	NormalEquations(std::size_t lookback, std::size_t horizon);

	void merge(const NormalEquations& other);
};

using augment::WindowSource;

// Number of fixed reduction chunks. The partition of windows into chunks and
// the pairwise merge order depend only on the window count, never on the
// thread count.
inline constexpr std::size_t kReductionChunks = 64;

// OpenMP accumulation over windows 0..count-1.
NormalEquations accumulate(std::size_t lookback, std::size_t horizon, std::size_t count, const WindowSource& source);
NormalEquations accumulate(std::span<const augment::SeriesWindow> windows);

namespace serial {

// Single-threaded reference; bit-identical to forecast::accumulate.
NormalEquations accumulate(std::size_t lookback, std::size_t horizon, std::size_t count, const WindowSource& source);

} // namespace serial

// Minimizes sum ||W x + b - y||^2 + lambda ||W||^2 (bias unpenalized).
// Throws ParameterError for lambda < 0 and NumericError when the system is
// singular (use lambda > 0).
LinearForecaster solve(const NormalEquations& system, double lambda);

LinearForecaster fit_ridge(std::span<const augment::SeriesWindow> windows, double lambda = 1e-3);

struct Metrics {
	double mse = 0.0;
	double mae = 0.0;
	std::size_t count = 0; // windows evaluated
};

// Mean squared / absolute error over every (window, step, variate).
Metrics evaluate(const LinearForecaster& model, std::span<const augment::SeriesWindow> windows);
Metrics evaluate(const LinearForecaster& model, std::size_t count, const WindowSource& source);

// {"format": "dshuffle.linear", "shape": [T, L], "weights": [...], "bias": [...]}
nlohmann::json to_json(const LinearForecaster& model);
LinearForecaster from_json(const nlohmann::json& doc);

void save(const LinearForecaster& model, const std::filesystem::path& path);
LinearForecaster load(const std::filesystem::path& path);

} // namespace dshuffle::forecast
