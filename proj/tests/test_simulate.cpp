#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "signstable/similarity.hpp"
#include "signstable/simulate.hpp"
#include "signstable/sparse_vector.hpp"

using namespace signstable;

namespace {

SimSpec small_spec() {
    SimSpec spec;
    spec.dim = 60;
    spec.df = 1;
    spec.correlations = {0.0, 0.25, 0.5, 0.75, 1.0};
    spec.sparsity = 0.0;
    spec.repetitions = 4000;
    spec.alphas = {0.5, 1.0, 1.8};
    spec.seed = 11;
    return spec;
}

}  // namespace

TEST_CASE("fully correlated dense pairs coincide after normalization") {
    const SeededRng rng{71, 0};
    auto [u, v] = generate_pair(80, 1.0, 1, 0.0, rng);
    REQUIRE(u.entries.size() == 80);
    REQUIRE(v.entries.size() == 80);
    const auto nu = normalize(u);
    const auto nv = normalize(v);
    CHECK(rho_chi2(nu, nv) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho_alpha(nu, nv, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sparsity controls the zeroed fraction") {
    const SeededRng rng{72, 0};
    auto [u, v] = generate_pair(10000, 0.3, 1, 0.5, rng);
    const double fu = static_cast<double>(u.entries.size()) / 10000.0;
    const double fv = static_cast<double>(v.entries.size()) / 10000.0;
    CHECK(fu == doctest::Approx(0.5).epsilon(0.04));
    CHECK(fv == doctest::Approx(0.5).epsilon(0.04));
    CHECK(u.entries != v.entries);  // zeroing is independent per vector
}

namespace {

double sample_corr(const SparseVector& u, const SparseVector& v) {
    double su = 0, sv_ = 0, suu = 0, svv = 0, suv = 0;
    const double n = static_cast<double>(u.entries.size());
    for (std::size_t i = 0; i < u.entries.size(); ++i) {
        const double a = u.entries[i].second;
        const double b = v.entries[i].second;
        su += a;
        sv_ += b;
        suu += a * a;
        svv += b * b;
        suv += a * b;
    }
    const double cov = suv / n - (su / n) * (sv_ / n);
    return cov / std::sqrt((suu / n - su * su / (n * n)) * (svv / n - sv_ * sv_ / (n * n)));
}

}  // namespace

TEST_CASE("the correlation parameter drives dependence of the magnitudes") {
    const SeededRng rng{73, 0};
    // Large df: the shared chi-square scale is nearly constant, so
    // independent normals give nearly independent magnitudes.
    auto [u0, v0] = generate_pair(20000, 0.0, 100, 0.0, rng.fork(0));
    CHECK(std::abs(sample_corr(u0, v0)) < 0.05);

    // At moderate df the shared scale couples the magnitudes a little even
    // at correlation zero, but raising the parameter must dominate that.
    auto [ua, va] = generate_pair(20000, 0.0, 8, 0.0, rng.fork(1));
    auto [ub, vb] = generate_pair(20000, 0.9, 8, 0.0, rng.fork(2));
    CHECK(sample_corr(ub, vb) > sample_corr(ua, va) + 0.3);
}

TEST_CASE("generation parameters are validated") {
    const SeededRng rng{74, 0};
    CHECK_THROWS_AS(generate_pair(0, 0.5, 1, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_pair(10, -0.1, 1, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_pair(10, 1.1, 1, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_pair(10, 0.5, 0, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_pair(10, 0.5, 1, 1.0, rng), std::invalid_argument);

    SimSpec bad = small_spec();
    bad.alphas = {2.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small_spec();
    bad.repetitions = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small_spec();
    bad.correlations.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("experiment grid is deterministic and thread-count independent") {
    const auto spec = small_spec();
    const auto a = run_collision_experiment(spec, 1);
    const auto b = run_collision_experiment(spec, 1);
    const auto c = run_collision_experiment(spec, 3);
    REQUIRE(a.size() == spec.alphas.size() * spec.correlations.size());

    std::ostringstream sa, sb, sc;
    write_curves_csv(sa, a);
    write_curves_csv(sb, b);
    write_curves_csv(sc, c);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str() == sc.str());
}

TEST_CASE("curve columns behave like collision probabilities") {
    const auto points = run_collision_experiment(small_spec(), 3);
    for (const auto& pt : points) {
        CHECK(pt.rho_alpha >= 0.0);
        CHECK(pt.rho_alpha <= 1.0);
        // The chi-square similarity dominates rho_1 specifically.
        if (pt.alpha == 1.0) CHECK(pt.rho_chi2 >= pt.rho_alpha - 1e-13);
        CHECK(pt.p_empirical >= 0.0);
        CHECK(pt.p_empirical <= 1.0);
        CHECK(pt.p_chi2_2 <= pt.p_chi2_1 + 1e-12);
        // The acos curve bounds the empirical collision fraction from above
        // up to sampling noise.
        CHECK(pt.p_empirical <= pt.p_bound + 4.0 * pt.std_err + 1e-9);
        CHECK(pt.std_err <= std::sqrt(0.25 / static_cast<double>(4000)) + 1e-12);
    }

    // Analytic columns are monotone in the realized similarity: compare
    // every pair of cells at the same alpha.
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].alpha != points[j].alpha) continue;
            const double dr = points[i].rho_alpha - points[j].rho_alpha;
            CHECK(dr * (points[i].p_bound - points[j].p_bound) <= 1e-12);
            const double dc = points[i].rho_chi2 - points[j].rho_chi2;
            CHECK(dc * (points[i].p_chi2_1 - points[j].p_chi2_1) <= 1e-12);
            CHECK(dc * (points[i].p_chi2_2 - points[j].p_chi2_2) <= 1e-12);
        }
    }
}

TEST_CASE("the acos bound is much looser at small alpha") {
    auto spec = small_spec();
    spec.correlations = {0.0, 0.2, 0.4, 0.6, 0.8};
    spec.alphas = {0.2, 1.8};
    const auto points = run_collision_experiment(spec, 3);
    double gap_small = 0.0, gap_large = 0.0;
    for (const auto& pt : points) {
        const double gap = pt.p_bound - pt.p_empirical;
        if (pt.alpha == 0.2) gap_small += gap;
        if (pt.alpha == 1.8) gap_large += gap;
    }
    CHECK(gap_small > gap_large);
    CHECK(gap_small / 5.0 > 0.02);
}

TEST_CASE("file experiments report exact self-collisions and honest disjoint pairs") {
    std::vector<LabeledVector> vecs;
    vecs.push_back({"left", SparseVector(6, {{0, 1.0}, {1, 2.0}, {2, 1.0}})});
    vecs.push_back({"same", SparseVector(6, {{0, 2.0}, {1, 4.0}, {2, 2.0}})});
    vecs.push_back({"off", SparseVector(6, {{3, 1.0}, {5, 2.0}})});

    FileExperimentSpec spec;
    spec.k = 20000;
    spec.alpha = 1.0;
    spec.seed = 909;
    const auto rows = run_file_experiment(vecs, spec);
    REQUIRE(rows.size() == 3);  // all unordered pairs of 3 vectors

    for (const auto& r : rows) {
        if (r.label_u == "left" && r.label_v == "same") {
            // Scaled copies have identical normalized form and identical
            // sketches.
            CHECK(r.rho_chi2 == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(r.p_empirical == 0.0);
        }
        if (r.label_v == "off") {
            CHECK(r.rho_chi2 == 0.0);
            CHECK(r.p_bound == 0.5);
            const double se = std::sqrt(0.25 / 20000.0);
            CHECK(std::abs(r.p_empirical - 0.5) <= 4.0 * se);
        }
    }

    const auto again = run_file_experiment(vecs, spec);
    std::ostringstream s1, s2;
    write_pairs_csv(s1, rows);
    write_pairs_csv(s2, again);
    CHECK(s1.str() == s2.str());
}

TEST_CASE("explicit pair lists are honored") {
    std::vector<LabeledVector> vecs;
    vecs.push_back({"a", SparseVector(3, {{0, 1.0}})});
    vecs.push_back({"b", SparseVector(3, {{1, 1.0}})});
    vecs.push_back({"c", SparseVector(3, {{2, 1.0}})});
    FileExperimentSpec spec;
    spec.k = 64;
    spec.pairs = {{2, 0}};
    const auto rows = run_file_experiment(vecs, spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].label_u == "c");
    CHECK(rows[0].label_v == "a");

    spec.pairs = {{0, 3}};
    CHECK_THROWS_AS(run_file_experiment(vecs, spec), std::invalid_argument);
}

TEST_CASE("csv headers are stable") {
    std::ostringstream curves, pairs;
    write_curves_csv(curves, {});
    write_pairs_csv(pairs, {});
    CHECK(curves.str() ==
          "alpha,correlation,rho_alpha,rho_chi2,p_empirical,p_bound,p_chi2_1,p_chi2_2,std_err\n");
    CHECK(pairs.str() ==
          "label_u,label_v,alpha,rho_alpha,rho_chi2,p_empirical,p_bound,p_chi2_1,p_chi2_2,std_err\n");
}
