#include "dshuffle/matrix.hpp"

#include "dshuffle/error.hpp"

#include <algorithm>
#include <cmath>

namespace dshuffle {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
	if (data_.size() != rows_ * cols_) {
		throw SizeError("matrix: data length does not match shape");
	}
}

std::vector<double> Matrix::column(std::size_t c) const {
	std::vector<double> out(rows_);
	for (std::size_t r = 0; r < rows_; ++r) {
		out[r] = (*this)(r, c);
	}
	return out;
}

bool Matrix::all_finite() const noexcept {
	return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
	if (top.cols() != bottom.cols()) {
		throw SizeError("vstack: column counts differ");
	}
	std::vector<double> data;
	data.reserve(top.data().size() + bottom.data().size());
	data.insert(data.end(), top.data().begin(), top.data().end());
	data.insert(data.end(), bottom.data().begin(), bottom.data().end());
	return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(data));
}

} // namespace dshuffle
