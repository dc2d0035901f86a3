#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "signstable/rng.hpp"
#include "signstable/sparse_vector.hpp"

namespace signstable {

// Synthetic-experiment layout: heavy-tailed correlated pairs on a grid of
// (alpha, correlation) cells, one frozen data pair per cell, `repetitions`
// independent single-projection sign trials.
struct SimSpec {
    std::size_t dim = 100;
    unsigned df = 1;                    // t-distribution degrees of freedom
    std::vector<double> correlations;   // grid values in [0, 1]
    double sparsity = 0.0;              // fraction of entries zeroed, in [0, 1)
    std::size_t repetitions = 100000;
    std::vector<double> alphas;         // stability indices in (0, 2]
    std::uint64_t seed = 1;

    void validate() const;
};

// One experiment-grid cell result; rows of the curves CSV.
struct CollisionCurvePoint {
    double alpha = 0.0;
    double correlation = 0.0;
    double rho_alpha = 0.0;
    double rho_chi2 = 0.0;
    double p_empirical = 0.0;
    double p_bound = 0.0;
    double p_chi2_1 = 0.0;
    double p_chi2_2 = 0.0;
    double std_err = 0.0;
};

// One file-experiment row: a labeled vector pair instead of a grid cell.
struct PairCurvePoint {
    std::string label_u;
    std::string label_v;
    double alpha = 0.0;
    double rho_alpha = 0.0;
    double rho_chi2 = 0.0;
    double p_empirical = 0.0;
    double p_bound = 0.0;
    double p_chi2_1 = 0.0;
    double p_chi2_2 = 0.0;
    double std_err = 0.0;
};

// Two nonnegative vectors: per coordinate, |bivariate t| draws (correlated
// normals over a shared chi-square scale), then each entry independently
// zeroed with probability `sparsity` (independently in u and in v).
std::pair<SparseVector, SparseVector> generate_pair(std::size_t dim, double correlation,
                                                    unsigned df, double sparsity,
                                                    const SeededRng& rng);

// Full grid run. Cell seeds derive from (spec.seed, alpha index,
// correlation index), so the output is bit-identical for any thread count.
std::vector<CollisionCurvePoint> run_collision_experiment(const SimSpec& spec,
                                                          unsigned threads = 1);

// Collision curves for concrete vectors: normalize, sketch everything once
// under a shared k-projection config, then compare empirical collision
// fractions against the analytic columns per pair. An empty `pairs` list
// means all unordered pairs i < j.
struct FileExperimentSpec {
    std::uint32_t k = 100000;
    double alpha = 1.0;
    std::uint64_t seed = 1;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

std::vector<PairCurvePoint> run_file_experiment(std::span<const LabeledVector> vectors,
                                                const FileExperimentSpec& spec);

// curves CSV: header
// alpha,correlation,rho_alpha,rho_chi2,p_empirical,p_bound,p_chi2_1,p_chi2_2,std_err
void write_curves_csv(std::ostream& out, std::span<const CollisionCurvePoint> points);

// pair CSV: same analytic columns keyed by the two vector labels.
void write_pairs_csv(std::ostream& out, std::span<const PairCurvePoint> points);

}  // namespace signstable
