#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dshuffle {

// Dense row-major matrix of doubles. Rows index time, columns index variates.
class Matrix {
public:
	Matrix() = default;
	Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
	Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

	std::size_t rows() const noexcept { return rows_; }
	std::size_t cols() const noexcept { return cols_; }
	bool empty() const noexcept { return data_.empty(); }

	double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
	double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

	std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
	std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

	std::vector<double> column(std::size_t c) const;

	std::span<const double> data() const noexcept { return data_; }
	std::span<double> data() noexcept { return data_; }

	bool all_finite() const noexcept;

	friend bool operator==(const Matrix&, const Matrix&) = default;

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<double> data_;
};

// Rows of `top` followed by rows of `bottom`; column counts must agree.
Matrix vstack(const Matrix& top, const Matrix& bottom);

} // namespace dshuffle
