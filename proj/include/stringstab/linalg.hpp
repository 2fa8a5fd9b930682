#pragma once

#include <complex>
#include <vector>

namespace stringstab {

/// Minimal dense real matrix, row-major storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }

    [[nodiscard]] double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    [[nodiscard]] double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Determinant of an n-by-n complex matrix (row-major, consumed by value) via
/// LU factorization with partial pivoting. A vanishing pivot yields 0.
std::complex<double> lu_determinant(std::vector<std::complex<double>> a, int n);

}  // namespace stringstab
