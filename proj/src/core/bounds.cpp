// SPDX-License-Identifier: Apache-2.0
#include "core/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace mch {

namespace {

void require_u(double u) {
    if (!(u >= 0.0)) fail(ErrorCode::NegativeU, "u must be >= 0, got " + std::to_string(u));
}

void require_lambda_finite(double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        fail(ErrorCode::InvalidArgument, "lambda must be finite and >= 0, got " + std::to_string(lambda));
    }
}

void require_positive(double x, const char* what) {
    if (!std::isfinite(x) || x <= 0.0) {
        fail(ErrorCode::InvalidArgument, std::string(what) + " must be finite and positive");
    }
}

void collect(int remaining, bool last_was_zero, std::uint32_t mask, int position,
             std::vector<std::uint32_t>& out) {
    if (remaining == 0) {
        out.push_back(mask);
        return;
    }
    const bool final_bit = remaining == 1;
    collect(remaining - 1, false, mask | (1U << position), position + 1, out);
    // A zero may not be first, last, or follow another zero.
    if (position != 0 && !final_bit && !last_was_zero) {
        collect(remaining - 1, true, mask, position + 1, out);
    }
}

}  // namespace

std::string_view bound_kind_name(BoundKind kind) noexcept {
    switch (kind) {
        case BoundKind::IidHoeffding: return "iid";
        case BoundKind::Healy: return "healy";
        case BoundKind::Rao: return "rao";
        case BoundKind::Fjs: return "fjs";
        case BoundKind::Moment: return "moment";
        case BoundKind::Monomial: return "monomial";
        case BoundKind::MatrixSchatten: return "matrix_schatten";
        case BoundKind::Glss: return "glss";
    }
    return "unknown";
}

void BoundSpec::validate() const {
    require_positive(constants.matrix_c, "matrix constant C");
    require_positive(constants.glss_c, "GLSS constant c");
    require_positive(constants.vector_c, "vector constant C");
    require_positive(constants.vector_l, "vector constant L");
}

double bound_iid_hoeffding(double u) {
    require_u(u);
    return 2.0 * std::exp(-u * u / 2.0);
}

double bound_healy(double u, double lambda) {
    require_u(u);
    require_lambda_finite(lambda);
    return 2.0 * std::exp(-u * u * (1.0 - lambda) / 4.0);
}

double bound_rao(double u, double lambda) {
    require_u(u);
    require_lambda_finite(lambda);
    return 2.0 * std::exp(-u * u * (1.0 - lambda) / (64.0 * std::numbers::e));
}

double bound_fjs(double u, double lambda) {
    require_u(u);
    require_lambda_finite(lambda);
    return 2.0 * std::exp(-u * u * (1.0 - lambda) / (2.0 * (1.0 + lambda)));
}

double bound_glss(double u, double lambda, double d, double c) {
    require_u(u);
    require_lambda_finite(lambda);
    require_positive(c, "GLSS constant c");
    require_positive(d, "dimension d");
    return 2.0 * d * std::exp(-c * (1.0 - lambda) * u * u);
}

double bound_mgf(double u, double lambda) {
    require_u(u);
    require_lambda_finite(lambda);
    return 2.0 * std::exp(u * u * (1.0 - lambda) / 64.0);
}

double evaluate_tail_bound(const BoundSpec& spec, double u, double lambda, double dimension) {
    spec.validate();
    switch (spec.kind) {
        case BoundKind::IidHoeffding: return bound_iid_hoeffding(u);
        case BoundKind::Healy: return bound_healy(u, lambda);
        case BoundKind::Rao: return bound_rao(u, lambda);
        case BoundKind::Fjs: return bound_fjs(u, lambda);
        case BoundKind::Glss: return bound_glss(u, lambda, dimension, spec.constants.glss_c);
        case BoundKind::Moment:
        case BoundKind::Monomial:
        case BoundKind::MatrixSchatten:
            break;
    }
    fail(ErrorCode::InvalidArgument,
         std::string(bound_kind_name(spec.kind)) + " is not a tail bound in u");
}

std::string AdmissibleStrings::to_string(std::size_t i) const {
    std::string s(static_cast<std::size_t>(length()), '0');
    for (int k = 0; k < length(); ++k) {
        if (bit(masks_[i], k)) s[static_cast<std::size_t>(k)] = '1';
    }
    return s;
}

AdmissibleStrings enumerate_admissible_strings(int q) {
    if (q < 2) fail(ErrorCode::InvalidArgument, "admissible strings need q >= 2");
    if (q > kMaxAdmissibleQ) {
        fail(ErrorCode::TooLarge, "admissible strings capped at q = " + std::to_string(kMaxAdmissibleQ));
    }
    std::vector<std::uint32_t> masks;
    collect(q - 1, false, 0U, 0, masks);
    return AdmissibleStrings(q, std::move(masks));
}

double bound_monomial(std::span<const std::size_t> w, double lambda, std::span<const double> a) {
    if (w.size() < 2) fail(ErrorCode::InvalidArgument, "monomial bound needs q >= 2 factors");
    if (!std::is_sorted(w.begin(), w.end())) fail(ErrorCode::Unsorted, "index vector w must be nondecreasing");
    if (w.back() >= a.size()) fail(ErrorCode::OutOfRange, "index vector w exceeds the number of steps");
    require_lambda_finite(lambda);

    const AdmissibleStrings strings = enumerate_admissible_strings(static_cast<int>(w.size()));

    double prefactor = 1.0;
    for (std::size_t i : w) prefactor *= a[i];

    std::vector<double> factors(w.size() - 1);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        factors[i] = std::pow(lambda, static_cast<double>(w[i + 1] - w[i]));
    }
    double total = 0.0;
    for (std::uint32_t mask : strings.masks()) {
        double term = 1.0;
        for (int i = 0; i < strings.length(); ++i) {
            if (AdmissibleStrings::bit(mask, i)) term *= factors[static_cast<std::size_t>(i)];
        }
        total += term;
    }
    return prefactor * total;
}

double bound_moment(int q, double lambda, std::span<const double> a) {
    if (q < 2) fail(ErrorCode::InvalidArgument, "moment bound needs q >= 2");
    if (q % 2 != 0) fail(ErrorCode::OddQ, "moment bound holds for even q only, got " + std::to_string(q));
    require_lambda_finite(lambda);
    if (lambda >= 1.0) fail(ErrorCode::LambdaGeOne, "moment bound needs lambda < 1");
    double sum_sq = 0.0;
    for (double x : a) sum_sq += x * x;
    const double half = q / 2.0;
    return std::pow(4.0, q) * std::tgamma(half + 1.0) * std::pow(1.0 / (1.0 - lambda), half) *
           std::pow(sum_sq, half);
}

double bound_matrix_schatten(double sigma, double sigma_star, double dimension, double lambda,
                             double b_norm, double c) {
    if (!(sigma >= 0.0) || !(sigma_star >= 0.0) || !(b_norm >= 0.0)) {
        fail(ErrorCode::InvalidArgument, "sigma, sigma_star and ||B|| must be nonnegative");
    }
    if (!(dimension >= 1.0)) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
    require_positive(c, "matrix constant C");
    require_lambda_finite(lambda);
    if (lambda >= 1.0) fail(ErrorCode::LambdaGeOne, "Schatten bound needs lambda < 1");
    const double shape = sigma + sigma_star * std::sqrt(std::log(dimension));
    return std::min(c / std::sqrt(1.0 - lambda) * shape, b_norm);
}

}  // namespace mch
