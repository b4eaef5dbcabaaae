// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mch {

enum class BoundKind { IidHoeffding, Healy, Rao, Fjs, Moment, Monomial, MatrixSchatten, Glss };

[[nodiscard]] std::string_view bound_kind_name(BoundKind kind) noexcept;

/// Universal constants that are only known up to a constant factor. All
/// default to 1 and are meant to be fitted from experiments.
struct BoundConstants {
    double matrix_c = 1.0;   // C in the Schatten-norm expectation bound
    double glss_c = 1.0;     // c in 2d exp(-c(1-lambda)u^2)
    double vector_c = 1.0;   // C in the vector-valued tail
    double vector_l = 1.0;   // L in the vector-valued tail
};

struct BoundSpec {
    BoundKind kind = BoundKind::Rao;
    BoundConstants constants{};

    /// Throws InvalidArgument unless every constant is finite and positive.
    void validate() const;
};

/// A raw bound value together with whether it says anything (< 1).
struct BoundValue {
    double value = 0.0;
    bool vacuous = false;
};

[[nodiscard]] inline BoundValue assess(double value) noexcept { return {value, !(value < 1.0)}; }

// Tail bounds for Pr[|S_n| >= u * ||a||_2]. Raw values, never clamped.
double bound_iid_hoeffding(double u);                 // 2 exp(-u^2/2)
double bound_healy(double u, double lambda);          // 2 exp(-u^2 (1-lambda)/4)
double bound_rao(double u, double lambda);            // 2 exp(-u^2 (1-lambda)/(64e))
double bound_fjs(double u, double lambda);            // 2 exp(-u^2 (1-lambda)/(2(1+lambda)))
double bound_glss(double u, double lambda, double d, double c);  // 2d exp(-c(1-lambda)u^2)

/// MGF bound 2 exp(u^2 (1-lambda)/64), valid at theta = (1-lambda)u/(32||a||_2).
double bound_mgf(double u, double lambda);

/// Dispatch for the tail kinds (iid, healy, rao, fjs, glss).
double evaluate_tail_bound(const BoundSpec& spec, double u, double lambda, double dimension = 1.0);

/// Binary strings of length q-1 with no two consecutive zeros whose first and
/// last bits are 1. Bit k of mask m is s_{k+1}.
class AdmissibleStrings {
public:
    AdmissibleStrings(int q, std::vector<std::uint32_t> masks) : q_(q), masks_(std::move(masks)) {}

    [[nodiscard]] int q() const noexcept { return q_; }
    [[nodiscard]] int length() const noexcept { return q_ - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return masks_.size(); }
    [[nodiscard]] const std::vector<std::uint32_t>& masks() const noexcept { return masks_; }
    [[nodiscard]] static bool bit(std::uint32_t mask, int position) noexcept {
        return ((mask >> position) & 1U) != 0U;
    }
    /// "101"-style rendering, s_1 first.
    [[nodiscard]] std::string to_string(std::size_t i) const;

private:
    int q_;
    std::vector<std::uint32_t> masks_;
};

inline constexpr int kMaxAdmissibleQ = 30;

/// Exhaustive enumeration; TooLarge for q > 30, InvalidArgument for q < 2.
AdmissibleStrings enumerate_admissible_strings(int q);

/// a_{w_1}...a_{w_q} * sum_{s in S_{q-1}} prod_{i: s_i = 1} lambda^{w_{i+1} - w_i}.
/// `w` holds zero-based step indices in nondecreasing order.
double bound_monomial(std::span<const std::size_t> w, double lambda, std::span<const double> a);

/// 4^q (q/2)! (1/(1-lambda))^{q/2} (sum a_i^2)^{q/2} for even q.
double bound_moment(int q, double lambda, std::span<const double> a);

/// min{ C/sqrt(1-lambda) (sigma + sigma_star sqrt(log d)), ||B||_{S_inf} }
double bound_matrix_schatten(double sigma, double sigma_star, double dimension, double lambda,
                             double b_norm, double c = 1.0);

}  // namespace mch
