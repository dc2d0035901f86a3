#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "signstable/rng.hpp"

namespace signstable {

// Parameters of an alpha-stable law S(alpha, beta, gamma). The scale gamma
// multiplies |t|^alpha in the characteristic function, so S(2, 0, gamma) is
// a normal law with variance 2*gamma and S(alpha, 0, gamma) equals
// gamma^(1/alpha) times a unit-scale variate.
//
// Only the symmetric (beta = 0) and maximally skewed (beta = 1) cases are
// supported; those are the two the projection machinery needs.
struct StableParams {
    double alpha = 2.0;
    int beta = 0;
    double gamma = 1.0;

    // Throws std::invalid_argument if the parameters are outside the
    // supported family (alpha in (0,2], beta in {0,1}, gamma > 0, and the
    // meaningless beta=1 at alpha=2 rejected).
    void validate() const;
};

// Alpha-stable variate generator via the Chambers-Mallows-Stuck transform.
// Every variate is a pure function of (params, rng, lane): variate number t
// reads uniforms from counter lane t of the stream, so single entries of a
// notional infinite sample can be regenerated in isolation. Intermediates
// that leave the double range trigger a redraw within the lane.
class StableSampler {
public:
    explicit StableSampler(const StableParams& params);

    const StableParams& params() const noexcept { return params_; }

    // The variate at lane `t`. Deterministic in (params, rng, t).
    double sample_at(const SeededRng& rng, std::uint64_t t) const;

    // Variates for lanes [0, out.size()).
    void sample_into(const SeededRng& rng, std::span<double> out) const;

    std::vector<double> sample(const SeededRng& rng, std::size_t n) const;

    // Uniform-counter lanes are 64 words wide: 32 (U, W) attempts per
    // variate before NumericError, which no supported alpha comes near.
    static constexpr std::uint64_t kLaneWidth = 64;

private:
    enum class Kind { gaussian, cauchy, skewed_unit_index, general };

    double raw_variate(const SeededRng& rng, std::uint64_t lane) const;

    StableParams params_;
    Kind kind_;
    double scale_;        // gamma^(1/alpha)
    double shift_;        // drift correction, nonzero only for alpha=1, beta=1
    double skew_angle_;   // B in the CMS transform
    double skew_scale_;   // S in the CMS transform
    double inv_alpha_;    // 1/alpha
    double exp_ratio_;    // (1-alpha)/alpha
};

// n i.i.d. variates from S(alpha, beta, gamma).
std::vector<double> sample_stable(const StableParams& params, const SeededRng& rng, std::size_t n);

// n variates of S(alpha, 0, 1) built as T^(1/2) * X with
// T ~ S(alpha/2, 1, cos(pi*alpha/4)) and X ~ N(0, 2), the product
// factorization of a symmetric stable law. Requires alpha < 2.
std::vector<double> sample_factorized(double alpha, const SeededRng& rng, std::size_t n);

// Sampler pair used by the factorization; exposed so the mixture
// representation of the collision probability can draw the same T.
StableParams factorization_skewed_params(double alpha);

}  // namespace signstable
