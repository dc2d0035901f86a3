#include "signstable/stable.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "signstable/errors.hpp"

namespace signstable {

namespace {
constexpr double kPi = std::numbers::pi;
}

void StableParams::validate() const {
    if (!(alpha > 0.0) || !(alpha <= 2.0)) {
        throw std::invalid_argument("stable: alpha must be in (0, 2], got " + std::to_string(alpha));
    }
    if (beta != 0 && beta != 1) {
        throw std::invalid_argument("stable: beta must be 0 or 1, got " + std::to_string(beta));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("stable: gamma must be positive, got " + std::to_string(gamma));
    }
    if (beta == 1 && alpha == 2.0) {
        throw std::invalid_argument("stable: skewness is meaningless at alpha = 2");
    }
}

StableSampler::StableSampler(const StableParams& params) : params_(params) {
    params_.validate();
    const double alpha = params_.alpha;
    const int beta = params_.beta;

    scale_ = std::pow(params_.gamma, 1.0 / alpha);
    shift_ = 0.0;
    skew_angle_ = 0.0;
    skew_scale_ = 1.0;
    inv_alpha_ = 1.0 / alpha;
    exp_ratio_ = (1.0 - alpha) / alpha;

    if (beta == 0 && alpha == 2.0) {
        kind_ = Kind::gaussian;
    } else if (beta == 0 && alpha == 1.0) {
        kind_ = Kind::cauchy;
    } else if (beta == 1 && alpha == 1.0) {
        // Scale multiplication of a skewed 1-stable law introduces a drift;
        // compensate so the characteristic function keeps mu = 0.
        kind_ = Kind::skewed_unit_index;
        shift_ = (2.0 / kPi) * params_.gamma * std::log(params_.gamma);
    } else {
        kind_ = Kind::general;
        const double tan_half = std::tan(kPi * alpha / 2.0);
        if (beta == 1) {
            skew_angle_ = std::atan(tan_half) / alpha;
            skew_scale_ = std::pow(1.0 + tan_half * tan_half, 1.0 / (2.0 * alpha));
        }
    }
}

double StableSampler::raw_variate(const SeededRng& rng, std::uint64_t lane) const {
    const std::uint64_t lane_base = lane * kLaneWidth;
    for (std::uint64_t attempt = 0; attempt < kLaneWidth / 2; ++attempt) {
        const double u1 = rng.uniform_at(lane_base + 2 * attempt);
        const double u2 = rng.uniform_at(lane_base + 2 * attempt + 1);
        const double angle = kPi * (u1 - 0.5);  // Uniform(-pi/2, pi/2)

        double z;
        switch (kind_) {
            case Kind::gaussian:
                // CMS at alpha = 2 reduces to 2*sin(U)*sqrt(W).
                z = 2.0 * std::sin(angle) * std::sqrt(-std::log(u2));
                break;
            case Kind::cauchy:
                // CMS at alpha = 1, beta = 0 reduces to tan(U).
                z = std::tan(angle);
                break;
            case Kind::skewed_unit_index: {
                const double w = -std::log(u2);
                const double half_pi = kPi / 2.0;
                z = (2.0 / kPi) * ((half_pi + angle) * std::tan(angle) -
                                   std::log(half_pi * w * std::cos(angle) / (half_pi + angle)));
                break;
            }
            case Kind::general: {
                const double w = -std::log(u2);
                const double shifted = params_.alpha * (angle + skew_angle_);
                z = skew_scale_ * std::sin(shifted) *
                    std::pow(std::cos(angle), -inv_alpha_) *
                    std::pow(std::cos(angle - shifted) / w, exp_ratio_);
                break;
            }
        }
        if (std::isfinite(z)) return z;
    }
    throw NumericError("stable: variate lane exhausted (alpha=" + std::to_string(params_.alpha) + ")");
}

double StableSampler::sample_at(const SeededRng& rng, std::uint64_t t) const {
    return scale_ * raw_variate(rng, t) + shift_;
}

void StableSampler::sample_into(const SeededRng& rng, std::span<double> out) const {
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] = scale_ * raw_variate(rng, t) + shift_;
    }
}

std::vector<double> StableSampler::sample(const SeededRng& rng, std::size_t n) const {
    std::vector<double> out(n);
    sample_into(rng, out);
    return out;
}

std::vector<double> sample_stable(const StableParams& params, const SeededRng& rng, std::size_t n) {
    return StableSampler(params).sample(rng, n);
}

StableParams factorization_skewed_params(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) {
        throw std::invalid_argument("factorization: alpha must be in (0, 2), got " + std::to_string(alpha));
    }
    return StableParams{alpha / 2.0, 1, std::cos(kPi * alpha / 4.0)};
}

std::vector<double> sample_factorized(double alpha, const SeededRng& rng, std::size_t n) {
    const StableSampler skewed(factorization_skewed_params(alpha));
    const StableSampler normal(StableParams{2.0, 0, 1.0});  // N(0, 2)
    const SeededRng rng_t = rng.fork(1);
    const SeededRng rng_x = rng.fork(2);

    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = std::sqrt(skewed.sample_at(rng_t, t)) * normal.sample_at(rng_x, t);
    }
    return out;
}

}  // namespace signstable
