#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "signstable/rng.hpp"
#include "signstable/sparse_vector.hpp"
#include "signstable/stable.hpp"

namespace signstable {

// Identity of a projection family. Two sketches are comparable iff their
// configs are identical; the master seed pins every row of the notional
// D x k projection matrix.
struct SketchConfig {
    std::uint32_t k = 0;
    double alpha = 1.0;
    std::uint64_t master_seed = 1;

    void validate() const;

    friend bool operator==(const SketchConfig&, const SketchConfig&) = default;
};

// Generator for row i of the projection matrix. The stream id is an
// avalanche mix of (master_seed, i) so any row is reproducible in
// isolation, which is what the streaming update relies on.
SeededRng row_rng(const SketchConfig& config, std::uint64_t i);

// Row i of the projection matrix: k i.i.d. S(alpha, 0, 1) variates.
std::vector<double> project_row(const SketchConfig& config, std::uint64_t i);

// k sign bits of a projected vector. Bit j is 1 iff the j-th projection is
// nonnegative (sign(0) counts as +1). Packed LSB-first: bit j lives in
// byte j/8 at position j%8, matching the SSKB file layout.
class SignSketch {
public:
    SignSketch() = default;
    SignSketch(SketchConfig config, std::vector<std::uint8_t> bits);

    const SketchConfig& config() const noexcept { return config_; }
    std::uint32_t k() const noexcept { return config_.k; }
    const std::vector<std::uint8_t>& bytes() const noexcept { return bits_; }

    bool bit(std::uint32_t j) const { return (bits_[j >> 3] >> (j & 7)) & 1; }

    // Sign bits from projected values.
    static SignSketch from_projections(const SketchConfig& config, std::span<const double> x);

    friend bool operator==(const SignSketch&, const SignSketch&) = default;

private:
    SketchConfig config_;
    std::vector<std::uint8_t> bits_;
};

// Batch sketch of one vector: bit j = sign of sum_i u_i * r_{i,j}, summed
// over the support in ascending index order. Throws std::domain_error for
// an empty vector.
SignSketch sketch(const SparseVector& u, const SketchConfig& config);

// Sketches of many vectors under one config. Each projection row is
// generated once and shared, so the cost is (size of support union) * k
// stable draws instead of one full pass per vector.
std::vector<SignSketch> sketch_batch(std::span<const SparseVector> vectors, const SketchConfig& config);

// Number of differing sign bits divided by k. "Collision" here means the
// two signs disagree, so this estimates Pr(sign(x_j) != sign(y_j)).
// Throws std::invalid_argument on config mismatch.
double collision_fraction(const SignSketch& s1, const SignSketch& s2);

std::uint32_t hamming_distance(const SignSketch& s1, const SignSketch& s2);

// 2k-entry binary feature vector for linear learning: sign + encodes as
// (1,0), sign - as (0,1); exactly k ones.
std::vector<std::uint8_t> encode_features(const SignSketch& s);

// Bits [offset, offset+width) read most-significant-first as a hash-bucket
// index in [0, 2^width). width must be in [1, 64] with offset+width <= k.
std::uint64_t bucket_code(const SignSketch& s, std::uint32_t offset, std::uint32_t width);

// Running projection state for one turnstile stream: the k projected values
// plus the error-free sum counter. Updates may be negative; the sign bits
// are materialized only on demand.
class StreamSketchState {
public:
    explicit StreamSketchState(SketchConfig config);

    const SketchConfig& config() const noexcept { return config_; }
    std::span<const double> projections() const noexcept { return x_; }
    double sum_counter() const noexcept { return sum_; }

    // Apply the stream element (i, increment): x_j += increment * r_{i,j}
    // for all j, and the sum counter advances by the increment.
    void update(std::uint64_t i, double increment);

    SignSketch to_sketch() const;

private:
    SketchConfig config_;
    StableSampler sampler_;
    std::vector<double> x_;
    std::vector<double> row_scratch_;
    double sum_ = 0.0;
};

// SSKB sketch container: header (magic "SSKB", version, alpha, k, seed)
// followed by length-prefixed labeled bit records.
struct LabeledSketch {
    std::string label;
    SignSketch sketch;
};

struct SketchFileData {
    SketchConfig config;
    std::vector<LabeledSketch> sketches;
};

void write_sskb(std::ostream& out, const SketchFileData& data);
SketchFileData read_sskb(std::istream& in);
void save_sskb(const std::string& path, const SketchFileData& data);
SketchFileData load_sskb(const std::string& path);

}  // namespace signstable
