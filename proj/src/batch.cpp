#include "dshuffle/batch.hpp"

#include "dshuffle/error.hpp"

#include <exception>
#include <random>
#include <string>

namespace dshuffle::augment {

namespace {

void check_multiplier(std::size_t multiplier) {
	if (multiplier == 0) {
		throw ParameterError("augment_batch: multiplier must be at least 1");
	}
}

AugmentedWindow passthrough(const SeriesWindow& window, std::size_t index) {
	return {{window.history, window.future}, Provenance{index, std::nullopt, std::nullopt, 0}};
}

} // namespace

AugmentedWindow augment_copy(const WindowSource& source, std::size_t count, std::size_t index, std::size_t copy,
                             const AugmentSpec& spec) {
	const std::uint64_t seed = derive_seed(spec.seed, index, copy);
	Rng rng(seed);
	const SeriesWindow window = source(index);
	std::optional<SeriesWindow> donor;
	std::optional<std::size_t> partner;
	if (spec.method == Method::FreqMix) {
		// uniform over j != i; a single window can only mix with itself
		std::size_t j = index;
		if (count > 1) {
			std::uniform_int_distribution<std::size_t> pick(0, count - 2);
			j = pick(rng);
			if (j >= index) {
				++j;
			}
		}
		donor = j == index ? window : source(j);
		partner = j;
	}
	AugmentedWindow out = apply(window, donor ? &*donor : nullptr, spec, rng);
	out.provenance = Provenance{index, partner, spec.method, seed};
	return out;
}

AugmentedWindow augment_copy(std::span<const SeriesWindow> windows, std::size_t index, std::size_t copy,
                             const AugmentSpec& spec) {
	return augment_copy([windows](std::size_t i) { return windows[i]; }, windows.size(), index, copy, spec);
}

std::vector<AugmentedWindow> augment_batch(std::span<const SeriesWindow> windows, const AugmentSpec& spec,
                                           std::size_t multiplier) {
	check_multiplier(multiplier);
	const std::size_t n = windows.size();
	std::vector<AugmentedWindow> out(n * multiplier);
	for (std::size_t i = 0; i < n; ++i) {
		out[i] = passthrough(windows[i], i);
	}
	if (multiplier == 1 || n == 0) {
		return out;
	}
	spec.validate();

	const auto jobs = static_cast<std::int64_t>(n * (multiplier - 1));
	// exceptions may not cross the parallel region; keep the first by job order
	std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
#pragma omp parallel for schedule(dynamic, 16)
	for (std::int64_t job = 0; job < jobs; ++job) {
		const auto j = static_cast<std::size_t>(job);
		const std::size_t copy = 1 + j / n;
		const std::size_t index = j % n;
		try {
			out[copy * n + index] = augment_copy(windows, index, copy, spec);
		} catch (...) {
			errors[j] = std::current_exception();
		}
	}
	for (const auto& e : errors) {
		if (e) {
			std::rethrow_exception(e);
		}
	}
	return out;
}

namespace serial {

std::vector<AugmentedWindow> augment_batch(std::span<const SeriesWindow> windows, const AugmentSpec& spec,
                                           std::size_t multiplier) {
	check_multiplier(multiplier);
	const std::size_t n = windows.size();
	std::vector<AugmentedWindow> out;
	out.reserve(n * multiplier);
	for (std::size_t i = 0; i < n; ++i) {
		out.push_back(passthrough(windows[i], i));
	}
	if (multiplier == 1 || n == 0) {
		return out;
	}
	spec.validate();
	for (std::size_t copy = 1; copy < multiplier; ++copy) {
		for (std::size_t i = 0; i < n; ++i) {
			out.push_back(augment_copy(windows, i, copy, spec));
		}
	}
	return out;
}

} // namespace serial

std::vector<double> augment_array(const BatchDescriptor& d) {
	if (d.batch == 0 || d.lookback == 0 || d.horizon == 0 || d.variates == 0) {
		throw SizeError("augment_array: batch, lookback, horizon and variates must be positive");
	}
	const std::size_t length = d.lookback + d.horizon;
	const std::size_t stride = length * d.variates;
	if (d.data.size() != d.batch * stride) {
		throw SizeError("augment_array: data length " + std::to_string(d.data.size()) + " does not match shape (" +
		                std::to_string(d.batch) + ", " + std::to_string(length) + ", " + std::to_string(d.variates) +
		                ")");
	}
	check_multiplier(d.multiplier);
	if (d.multiplier == 1) {
		return {d.data.begin(), d.data.end()};
	}

	std::vector<SeriesWindow> windows;
	windows.reserve(d.batch);
	const std::size_t cut = d.lookback * d.variates;
	for (std::size_t b = 0; b < d.batch; ++b) {
		const auto first = d.data.begin() + static_cast<std::ptrdiff_t>(b * stride);
		windows.push_back({Matrix(d.lookback, d.variates, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(cut))),
		                   Matrix(d.horizon, d.variates,
		                          std::vector<double>(first + static_cast<std::ptrdiff_t>(cut),
		                                              first + static_cast<std::ptrdiff_t>(stride)))});
	}
	const std::vector<AugmentedWindow> augmented = augment_batch(windows, d.spec, d.multiplier);

	std::vector<double> out;
	out.reserve(augmented.size() * stride);
	for (const auto& w : augmented) {
		out.insert(out.end(), w.history.data().begin(), w.history.data().end());
		out.insert(out.end(), w.future.data().begin(), w.future.data().end());
	}
	return out;
}

} // namespace dshuffle::augment
