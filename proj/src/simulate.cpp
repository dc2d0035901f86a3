#include "signstable/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "signstable/collision.hpp"
#include "signstable/errors.hpp"
#include "signstable/similarity.hpp"
#include "signstable/sketch.hpp"
#include "signstable/stable.hpp"

namespace signstable {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Box-Muller pair from counters (c, c+1).
std::pair<double, double> normal_pair(const SeededRng& rng, std::uint64_t c) {
    const double radius = std::sqrt(-2.0 * std::log(rng.uniform_at(c)));
    const double angle = kTwoPi * rng.uniform_at(c + 1);
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

void SimSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("sim spec: dim must be >= 1");
    if (df < 1) throw std::invalid_argument("sim spec: df must be >= 1");
    if (repetitions < 1) throw std::invalid_argument("sim spec: repetitions must be >= 1");
    if (!(sparsity >= 0.0 && sparsity < 1.0)) {
        throw std::invalid_argument("sim spec: sparsity must be in [0, 1)");
    }
    if (correlations.empty()) throw std::invalid_argument("sim spec: empty correlation grid");
    for (double c : correlations) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("sim spec: correlations must lie in [0, 1]");
        }
    }
    if (alphas.empty()) throw std::invalid_argument("sim spec: empty alpha list");
    for (double a : alphas) StableParams{a, 0, 1.0}.validate();
}

std::pair<SparseVector, SparseVector> generate_pair(std::size_t dim, double correlation,
                                                    unsigned df, double sparsity,
                                                    const SeededRng& rng) {
    if (dim < 1) throw std::invalid_argument("generate_pair: dim must be >= 1");
    if (df < 1) throw std::invalid_argument("generate_pair: df must be >= 1");
    if (!(correlation >= 0.0 && correlation <= 1.0)) {
        throw std::invalid_argument("generate_pair: correlation must lie in [0, 1]");
    }
    if (!(sparsity >= 0.0 && sparsity < 1.0)) {
        throw std::invalid_argument("generate_pair: sparsity must be in [0, 1)");
    }

    const double mix = std::sqrt(1.0 - correlation * correlation);
    SparseVector u, v;
    u.dim = v.dim = dim;
    for (std::size_t i = 0; i < dim; ++i) {
        const SeededRng ci = rng.fork(i);
        const auto [z1, z2] = normal_pair(ci, 0);
        // Shared chi-square(df) scale makes the coordinate pair bivariate t.
        double chi = 0.0;
        std::uint64_t ctr = 2;
        for (unsigned j = 0; j < df; j += 2, ctr += 2) {
            const auto [g1, g2] = normal_pair(ci, ctr);
            chi += g1 * g1;
            if (j + 1 < df) chi += g2 * g2;
        }
        const double scale = std::sqrt(chi / df);
        double uval = std::abs(z1 / scale);
        double vval = std::abs((correlation * z1 + mix * z2) / scale);
        if (sparsity > 0.0) {
            if (ci.uniform_at(ctr) < sparsity) uval = 0.0;
            if (ci.uniform_at(ctr + 1) < sparsity) vval = 0.0;
        }
        if (uval > 0.0 && std::isfinite(uval)) u.entries.emplace_back(i, uval);
        if (vval > 0.0 && std::isfinite(vval)) v.entries.emplace_back(i, vval);
    }
    return {std::move(u), std::move(v)};
}

namespace {

// Data pair for one grid cell; regenerated (deterministically) in the
// astronomically unlikely event sparsification empties a vector.
std::pair<SparseVector, SparseVector> cell_pair(const SimSpec& spec, double correlation,
                                                const SeededRng& cell_rng) {
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        auto pair = generate_pair(spec.dim, correlation, spec.df, spec.sparsity,
                                  cell_rng.fork(attempt));
        if (!pair.first.empty() && !pair.second.empty()) return pair;
    }
    throw NumericError("simulate: could not generate a nonempty pair");
}

CollisionCurvePoint run_cell(const SimSpec& spec, double alpha, double correlation,
                             const SeededRng& cell_rng) {
    const auto [u, v] = cell_pair(spec, correlation, cell_rng.fork(0));

    // `repetitions` independent single-projection sign trials are exactly a
    // k = repetitions sketch pair under a cell-specific master seed.
    SketchConfig config;
    config.k = static_cast<std::uint32_t>(spec.repetitions);
    config.alpha = alpha;
    config.master_seed = cell_rng.fork(1).base();
    const SparseVector batch[2] = {u, v};
    const auto sketches = sketch_batch(batch, config);

    CollisionCurvePoint pt;
    pt.alpha = alpha;
    pt.correlation = correlation;
    pt.rho_alpha = rho_alpha(u, v, alpha);
    pt.rho_chi2 = rho_chi2(normalize(u), normalize(v));
    pt.p_empirical = collision_fraction(sketches[0], sketches[1]);
    pt.p_bound = bound_acos(pt.rho_alpha);
    pt.p_chi2_1 = p_chi2_1(pt.rho_chi2);
    pt.p_chi2_2 = p_chi2_2(pt.rho_chi2);
    pt.std_err = std::sqrt(pt.p_empirical * (1.0 - pt.p_empirical) /
                           static_cast<double>(spec.repetitions));
    return pt;
}

}  // namespace

std::vector<CollisionCurvePoint> run_collision_experiment(const SimSpec& spec, unsigned threads) {
    spec.validate();
    const SeededRng base{spec.seed, 0};
    const std::size_t n_cells = spec.alphas.size() * spec.correlations.size();
    std::vector<CollisionCurvePoint> points(n_cells);

    const unsigned nt = std::max(1u, threads);
    std::vector<std::exception_ptr> failures(nt);
    auto work = [&](unsigned tid) {
        try {
            for (std::size_t cell = tid; cell < n_cells; cell += nt) {
                const std::size_t ai = cell / spec.correlations.size();
                const std::size_t ci = cell % spec.correlations.size();
                const SeededRng cell_rng = base.fork(ai).fork(ci);
                points[cell] = run_cell(spec, spec.alphas[ai], spec.correlations[ci], cell_rng);
            }
        } catch (...) {
            failures[tid] = std::current_exception();
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : failures) {
        if (e) std::rethrow_exception(e);
    }
    return points;
}

std::vector<PairCurvePoint> run_file_experiment(std::span<const LabeledVector> vectors,
                                                const FileExperimentSpec& spec) {
    if (vectors.empty()) throw std::invalid_argument("file experiment: no vectors");

    std::vector<SparseVector> normalized;
    normalized.reserve(vectors.size());
    for (const auto& lv : vectors) normalized.push_back(normalize(lv.vec));

    std::vector<std::pair<std::size_t, std::size_t>> pairs = spec.pairs;
    if (pairs.empty()) {
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            for (std::size_t j = i + 1; j < vectors.size(); ++j) pairs.emplace_back(i, j);
        }
    }
    for (const auto& [i, j] : pairs) {
        if (i >= vectors.size() || j >= vectors.size()) {
            throw std::invalid_argument("file experiment: pair index out of range");
        }
    }

    SketchConfig config;
    config.k = spec.k;
    config.alpha = spec.alpha;
    config.master_seed = spec.seed;
    const auto sketches = sketch_batch(normalized, config);

    std::vector<PairCurvePoint> out;
    out.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        PairCurvePoint pt;
        pt.label_u = vectors[i].label;
        pt.label_v = vectors[j].label;
        pt.alpha = spec.alpha;
        pt.rho_alpha = rho_alpha(normalized[i], normalized[j], spec.alpha);
        pt.rho_chi2 = rho_chi2(normalized[i], normalized[j]);
        pt.p_empirical = collision_fraction(sketches[i], sketches[j]);
        pt.p_bound = bound_acos(pt.rho_alpha);
        pt.p_chi2_1 = p_chi2_1(pt.rho_chi2);
        pt.p_chi2_2 = p_chi2_2(pt.rho_chi2);
        pt.std_err = std::sqrt(pt.p_empirical * (1.0 - pt.p_empirical) /
                               static_cast<double>(spec.k));
        out.push_back(std::move(pt));
    }
    return out;
}

namespace {

void append_analytics(std::string& row, const double* values, std::size_t n) {
    char buf[40];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), ",%.17g", values[i]);
        row += buf;
    }
}

}  // namespace

void write_curves_csv(std::ostream& out, std::span<const CollisionCurvePoint> points) {
    out << "alpha,correlation,rho_alpha,rho_chi2,p_empirical,p_bound,p_chi2_1,p_chi2_2,std_err\n";
    for (const auto& p : points) {
        char head[96];
        std::snprintf(head, sizeof(head), "%.17g,%.17g", p.alpha, p.correlation);
        std::string row = head;
        const double cols[] = {p.rho_alpha, p.rho_chi2,  p.p_empirical, p.p_bound,
                               p.p_chi2_1,  p.p_chi2_2, p.std_err};
        append_analytics(row, cols, 7);
        out << row << '\n';
    }
}

void write_pairs_csv(std::ostream& out, std::span<const PairCurvePoint> points) {
    out << "label_u,label_v,alpha,rho_alpha,rho_chi2,p_empirical,p_bound,p_chi2_1,p_chi2_2,"
           "std_err\n";
    for (const auto& p : points) {
        char head[40];
        std::snprintf(head, sizeof(head), ",%.17g", p.alpha);
        std::string row = p.label_u + "," + p.label_v + head;
        const double cols[] = {p.rho_alpha, p.rho_chi2,  p.p_empirical, p.p_bound,
                               p.p_chi2_1,  p.p_chi2_2, p.std_err};
        append_analytics(row, cols, 7);
        out << row << '\n';
    }
}

}  // namespace signstable
