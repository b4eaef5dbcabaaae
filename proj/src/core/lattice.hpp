// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/chain.hpp"
#include "core/tolerances.hpp"

namespace mch {

struct Rational {
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;
};

/// Best rational approximation of x with denominator <= max_denominator,
/// by continued fractions. Empty unless it matches x to within
/// fit * max(1, |x|).
std::optional<Rational> rational_approximation(double x, std::int64_t max_denominator, double fit);

/// f_i(v) = offset(i, v) * pitch, with integer offsets sharing no common factor.
struct LatticeEmbedding {
    Rational pitch;
    std::vector<std::int64_t> offsets;  // steps x states, row-major
    std::size_t states = 0;

    [[nodiscard]] double step() const noexcept {
        return static_cast<double>(pitch.numerator) / static_cast<double>(pitch.denominator);
    }
    [[nodiscard]] std::int64_t offset(std::size_t step_index, std::size_t state) const noexcept {
        return offsets[step_index * states + state];
    }
};

/// Throws NotLattice when some value has no rational form with denominator
/// <= tol.lattice_max_denominator, or the common denominator exceeds it.
LatticeEmbedding embed_on_lattice(const FunctionFamily& funcs, const Tolerances& tol = default_tolerances());

/// Distribution of S_n on the lattice {(min_offset + k) * step}.
class LatticeDistribution {
public:
    LatticeDistribution(Rational pitch, std::int64_t min_offset, std::vector<double> probabilities);

    [[nodiscard]] double step() const noexcept {
        return static_cast<double>(pitch_.numerator) / static_cast<double>(pitch_.denominator);
    }
    [[nodiscard]] const Rational& pitch() const noexcept { return pitch_; }
    [[nodiscard]] std::int64_t min_offset() const noexcept { return min_offset_; }
    [[nodiscard]] const std::vector<double>& probabilities() const noexcept { return probabilities_; }
    [[nodiscard]] std::size_t support_size() const noexcept { return probabilities_.size(); }
    [[nodiscard]] double value(std::size_t k) const noexcept;

    [[nodiscard]] double total() const;
    /// Pr[|S| >= threshold], with the boundary slack from tol.tail_boundary.
    [[nodiscard]] double tail(double threshold, const Tolerances& tol = default_tolerances()) const;
    [[nodiscard]] double moment(int m) const;
    [[nodiscard]] double mgf(double theta) const;

private:
    Rational pitch_;
    std::int64_t min_offset_;
    std::vector<double> probabilities_;
};

/// The event |s| >= threshold with the shared boundary slack.
[[nodiscard]] bool reaches_threshold(double s, double threshold, const Tolerances& tol = default_tolerances());

}  // namespace mch
