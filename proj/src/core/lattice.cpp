// SPDX-License-Identifier: Apache-2.0
#include "core/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "core/error.hpp"

namespace mch {

std::optional<Rational> rational_approximation(double x, std::int64_t max_denominator, double fit) {
    if (!std::isfinite(x)) return std::nullopt;
    const double target = std::abs(x);
    const double slack = fit * std::max(1.0, target);
    if (target > 1.0e12) return std::nullopt;

    // Convergents h/k of the continued fraction of |x|.
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(target));
    std::int64_t k_prev = 0, k = 1;
    double rest = target - std::floor(target);
    for (int iter = 0; iter < 64; ++iter) {
        if (std::abs(static_cast<double>(h) / static_cast<double>(k) - target) <= slack) {
            const std::int64_t sign = x < 0.0 ? -1 : 1;
            return Rational{sign * h, k};
        }
        if (rest <= 0.0) break;
        const double inv = 1.0 / rest;
        const double a_real = std::floor(inv);
        if (a_real > 1.0e15) break;
        const auto a = static_cast<std::int64_t>(a_real);
        rest = inv - a_real;
        const std::int64_t k_next = a * k + k_prev;
        if (k_next > max_denominator) break;
        const std::int64_t h_next = a * h + h_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    return std::nullopt;
}

LatticeEmbedding embed_on_lattice(const FunctionFamily& funcs, const Tolerances& tol) {
    const std::int64_t cap = tol.lattice_max_denominator;
    std::int64_t common = 1;
    for (double x : funcs.values().data()) {
        const auto r = rational_approximation(x, cap, tol.lattice_fit);
        if (!r) {
            fail(ErrorCode::NotLattice, "value " + std::to_string(x) +
                                            " has no rational form with denominator <= " + std::to_string(cap));
        }
        common = std::lcm(common, r->denominator);
        if (common > cap) {
            fail(ErrorCode::NotLattice, "common denominator of the function values exceeds " + std::to_string(cap));
        }
    }

    LatticeEmbedding out;
    out.states = funcs.states();
    out.offsets.reserve(funcs.values().data().size());
    std::int64_t divisor = 0;
    for (double x : funcs.values().data()) {
        const double scaled = x * static_cast<double>(common);
        const auto k = static_cast<std::int64_t>(std::llround(scaled));
        if (std::abs(static_cast<double>(k) - scaled) > tol.lattice_fit * std::max(1.0, std::abs(scaled)) * 16.0) {
            fail(ErrorCode::NotLattice, "value " + std::to_string(x) + " is off the common lattice");
        }
        out.offsets.push_back(k);
        divisor = std::gcd(divisor, k);
    }
    if (divisor == 0) divisor = 1;
    for (auto& k : out.offsets) k /= divisor;
    const std::int64_t g = std::gcd(divisor, common);
    out.pitch = Rational{divisor / g, common / g};
    return out;
}

bool reaches_threshold(double s, double threshold, const Tolerances& tol) {
    return std::abs(s) >= threshold - tol.tail_boundary * std::max(1.0, std::abs(threshold));
}

LatticeDistribution::LatticeDistribution(Rational pitch, std::int64_t min_offset, std::vector<double> probabilities)
    : pitch_(pitch), min_offset_(min_offset), probabilities_(std::move(probabilities)) {
    if (pitch_.denominator <= 0 || pitch_.numerator <= 0) {
        fail(ErrorCode::InvalidArgument, "lattice pitch must be a positive rational");
    }
}

double LatticeDistribution::value(std::size_t k) const noexcept {
    const auto offset = min_offset_ + static_cast<std::int64_t>(k);
    return static_cast<double>(offset * pitch_.numerator) / static_cast<double>(pitch_.denominator);
}

double LatticeDistribution::total() const { return compensated_sum(probabilities_); }

double LatticeDistribution::tail(double threshold, const Tolerances& tol) const {
    if (threshold <= 0.0) return 1.0;
    CompensatedSum acc;
    for (std::size_t k = 0; k < probabilities_.size(); ++k) {
        if (reaches_threshold(value(k), threshold, tol)) acc.add(probabilities_[k]);
    }
    return acc.value();
}

double LatticeDistribution::moment(int m) const {
    CompensatedSum acc;
    for (std::size_t k = 0; k < probabilities_.size(); ++k) {
        acc.add(probabilities_[k] * std::pow(value(k), m));
    }
    return acc.value();
}

double LatticeDistribution::mgf(double theta) const {
    CompensatedSum acc;
    for (std::size_t k = 0; k < probabilities_.size(); ++k) {
        acc.add(probabilities_[k] * std::exp(theta * value(k)));
    }
    return acc.value();
}

}  // namespace mch
