#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace seqrank {

using Vector = std::vector<double>;
using Complex = std::complex<double>;

// Dense row-major matrix of doubles. Item counts stay in the hundreds, so
// dense storage is used everywhere.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Dense square complex matrix, used for the phase (synchronization) operator.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, Complex{0.0, 0.0}) {}

    int size() const noexcept { return n_; }

    Complex& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    Complex operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

private:
    int n_ = 0;
    std::vector<Complex> data_;
};

} // namespace seqrank
