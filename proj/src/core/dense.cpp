// SPDX-License-Identifier: Apache-2.0
#include "core/dense.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace mch {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            fail(ErrorCode::DimensionMismatch, "ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            fail(ErrorCode::DimensionMismatch,
                 "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                     " entries, expected " + std::to_string(cols));
        }
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(ErrorCode::DimensionMismatch, "matrix sum of mismatched shapes");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(ErrorCode::DimensionMismatch, "matrix difference of mismatched shapes");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double scale) {
    for (double& x : data_) x *= scale;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(double scale, Matrix m) { return m *= scale; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows())
        fail(ErrorCode::DimensionMismatch, "matrix product of mismatched shapes");
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const double a = lhs(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

Vector multiply(const Matrix& m, std::span<const double> x) {
    if (m.cols() != x.size())
        fail(ErrorCode::DimensionMismatch, "matrix-vector product of mismatched shapes");
    Vector y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        CompensatedSum acc;
        for (std::size_t j = 0; j < m.cols(); ++j) acc.add(m(i, j) * x[j]);
        y[i] = acc.value();
    }
    return y;
}

Vector left_multiply(std::span<const double> x, const Matrix& m) {
    if (m.rows() != x.size())
        fail(ErrorCode::DimensionMismatch, "vector-matrix product of mismatched shapes");
    Vector y(m.cols(), 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < m.rows(); ++i) acc.add(x[i] * m(i, j));
        y[j] = acc.value();
    }
    return y;
}

Matrix matrix_power(const Matrix& m, std::size_t k) {
    if (!m.square()) fail(ErrorCode::DimensionMismatch, "power of a non-square matrix");
    Matrix result = Matrix::identity(m.rows());
    Matrix base = m;
    while (k > 0) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k > 0) base = base * base;
    }
    return result;
}

Matrix diagonal(std::span<const double> values) {
    Matrix d(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) d(i, i) = values[i];
    return d;
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(ErrorCode::DimensionMismatch, "comparison of mismatched shapes");
    double worst = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) worst = std::max(worst, std::abs(da[k] - db[k]));
    return worst;
}

bool is_symmetric(const Matrix& m, double tol) {
    if (!m.square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol) return false;
    return true;
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        correction_ += (sum_ - t) + x;
    } else {
        correction_ += (x - t) + sum_;
    }
    sum_ = t;
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kLeaf = 8;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double compensated_sum(std::span<const double> values) {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

}  // namespace mch
