// SPDX-License-Identifier: Apache-2.0
#include "core/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "core/error.hpp"

namespace mch {

namespace {

double frobenius(const Matrix& m) {
    CompensatedSum acc;
    for (double x : m.data()) acc.add(x * x);
    return std::sqrt(acc.value());
}

}  // namespace

SymmetricEigenResult symmetric_eigenvalues(const Matrix& m, const Tolerances& tol) {
    if (!m.square()) fail(ErrorCode::DimensionMismatch, "eigenvalues of a non-square matrix");
    const std::size_t n = m.rows();
    if (n > tol.jacobi_max_dimension) {
        fail(ErrorCode::TooLarge, "Jacobi eigensolver capped at dimension " +
                                      std::to_string(tol.jacobi_max_dimension));
    }
    for (double x : m.data()) {
        if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "non-finite matrix entry");
    }
    if (!is_symmetric(m)) fail(ErrorCode::InvalidArgument, "Jacobi eigensolver needs a symmetric matrix");

    Matrix a = m;
    SymmetricEigenResult result;
    const double threshold = tol.jacobi_rotation * frobenius(a);

    for (;;) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= threshold) continue;
                rotated = true;

                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = a(p, r) = c * arp - s * arq;
                    a(r, q) = a(q, r) = s * arp + c * arq;
                }
            }
        }
        if (!rotated) break;
        if (++result.sweeps > tol.jacobi_max_sweeps) {
            fail(ErrorCode::NonConvergence,
                 "Jacobi eigensolver exceeded " + std::to_string(tol.jacobi_max_sweeps) + " sweeps");
        }
    }

    result.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.eigenvalues[i] = a(i, i);
    std::sort(result.eigenvalues.begin(), result.eigenvalues.end(), std::greater<>());
    return result;
}

Vector singular_values(const Matrix& m, const Tolerances& tol) {
    for (double x : m.data()) {
        if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "non-finite matrix entry");
    }
    Matrix u = m;
    const std::size_t rows = u.rows();
    const std::size_t cols = u.cols();
    constexpr double kTiny = 1e-300;

    std::size_t sweeps = 0;
    for (;;) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < cols; ++i) {
            for (std::size_t j = i + 1; j < cols; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t k = 0; k < rows; ++k) {
                    alpha += u(k, i) * u(k, i);
                    beta += u(k, j) * u(k, j);
                    gamma += u(k, i) * u(k, j);
                }
                if (std::abs(gamma) <= kTiny ||
                    std::abs(gamma) <= tol.svd_offdiagonal * std::sqrt(alpha * beta)) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < rows; ++k) {
                    const double uki = u(k, i);
                    const double ukj = u(k, j);
                    u(k, i) = c * uki - s * ukj;
                    u(k, j) = s * uki + c * ukj;
                }
            }
        }
        if (!rotated) break;
        if (++sweeps > tol.svd_max_sweeps) {
            fail(ErrorCode::NonConvergence,
                 "one-sided Jacobi SVD exceeded " + std::to_string(tol.svd_max_sweeps) + " sweeps");
        }
    }

    Vector sv(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        CompensatedSum acc;
        for (std::size_t k = 0; k < rows; ++k) acc.add(u(k, j) * u(k, j));
        sv[j] = std::sqrt(acc.value());
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace mch
