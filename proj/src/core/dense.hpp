// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mch {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sizes here are small (N states, d <= 512), so a
/// flat std::vector is all the storage this project needs.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vector>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }

    [[nodiscard]] Matrix transposed() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double scale);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(double scale, Matrix m);

/// y = M x
Vector multiply(const Matrix& m, std::span<const double> x);
/// y = x^T M (row vector on the left)
Vector left_multiply(std::span<const double> x, const Matrix& m);

Matrix matrix_power(const Matrix& m, std::size_t k);
Matrix diagonal(std::span<const double> values);

[[nodiscard]] double max_abs_difference(const Matrix& a, const Matrix& b);
[[nodiscard]] bool is_symmetric(const Matrix& m, double tol = 0.0);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    [[nodiscard]] double value() const noexcept { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

/// Pairwise (cascade) summation; result is independent of how the input was
/// produced, only of its order.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

[[nodiscard]] double compensated_sum(std::span<const double> values);

}  // namespace mch
