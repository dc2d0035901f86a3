#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "signstable/errors.hpp"
#include "signstable/similarity.hpp"
#include "signstable/sketch.hpp"
#include "signstable/sparse_vector.hpp"
#include "signstable/stats.hpp"

using namespace signstable;

namespace {

SparseVector sv(std::size_t dim, std::vector<std::pair<std::size_t, double>> entries) {
    return SparseVector(dim, std::move(entries));
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS((SketchConfig{0, 1.0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SketchConfig{16, 0.0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SketchConfig{16, 2.1, 1}.validate()), std::invalid_argument);
    CHECK_NOTHROW((SketchConfig{16, 2.0, 1}.validate()));
}

TEST_CASE("projection rows are reproducible and independent across rows") {
    const SketchConfig cfg{100000, 1.0, 77};
    const auto r0 = project_row(cfg, 0);
    const auto r0_again = project_row(cfg, 0);
    CHECK(r0 == r0_again);

    // Two different rows should draw from the same distribution but be
    // distinct streams.
    const auto r1 = project_row(cfg, 1);
    CHECK(r0 != r1);
    const double ks = two_sample_ks(r0, r1);
    CHECK(ks < ks_critical(0.001, r0.size(), r1.size()));
}

TEST_CASE("alpha=2 rows have variance 2") {
    const SketchConfig cfg{1000000, 2.0, 5};
    const auto row = project_row(cfg, 3);
    double sum = 0.0, sq = 0.0;
    for (const double x : row) {
        sum += x;
        sq += x * x;
    }
    const double mean = sum / static_cast<double>(row.size());
    const double var = sq / static_cast<double>(row.size()) - mean * mean;
    CHECK(var == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("sketch is deterministic and scale invariant") {
    const SketchConfig cfg{512, 1.3, 9};
    const auto u = sv(10, {{0, 0.5}, {3, 1.5}, {7, 2.0}});
    const auto s = sketch(u, cfg);
    CHECK(s == sketch(u, cfg));

    // Signs only depend on the direction of the projection, so doubling the
    // vector changes nothing.
    const auto u2 = sv(10, {{0, 1.0}, {3, 3.0}, {7, 4.0}});
    CHECK(sketch(u2, cfg) == s);

    CHECK_THROWS_AS(sketch(SparseVector{}, cfg), std::domain_error);
}

TEST_CASE("sketch matches a by-hand row accumulation") {
    const SketchConfig cfg{64, 0.8, 123};
    const auto u = sv(6, {{1, 0.25}, {4, -1.5}, {5, 3.0}});
    std::vector<double> acc(cfg.k, 0.0);
    for (const auto& [idx, val] : u.entries) {
        const auto row = project_row(cfg, idx);
        for (std::uint32_t j = 0; j < cfg.k; ++j) acc[j] += val * row[j];
    }
    const auto s = sketch(u, cfg);
    for (std::uint32_t j = 0; j < cfg.k; ++j) {
        CHECK(s.bit(j) == (acc[j] >= 0.0));
    }
}

TEST_CASE("batch sketching equals one-at-a-time sketching") {
    const SketchConfig cfg{256, 1.0, 42};
    std::vector<SparseVector> vecs = {
        sv(8, {{0, 1.0}, {2, 2.0}}),
        sv(8, {{2, 1.0}, {3, 1.0}, {7, 0.5}}),
        sv(8, {{5, 4.0}}),
    };
    const auto batch = sketch_batch(vecs, cfg);
    REQUIRE(batch.size() == vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        CHECK(batch[i] == sketch(vecs[i], cfg));
    }
}

TEST_CASE("collision fraction counts disagreeing signs") {
    const SketchConfig cfg{16, 1.0, 1};
    const std::vector<double> plus(16, 1.0);
    const std::vector<double> minus(16, -1.0);
    const auto sp = SignSketch::from_projections(cfg, plus);
    const auto sm = SignSketch::from_projections(cfg, minus);
    CHECK(collision_fraction(sp, sp) == 0.0);
    CHECK(collision_fraction(sp, sm) == 1.0);
    CHECK(hamming_distance(sp, sm) == 16);

    const SketchConfig other{16, 1.0, 2};
    const auto so = SignSketch::from_projections(other, plus);
    CHECK_THROWS_AS(collision_fraction(sp, so), std::invalid_argument);
}

TEST_CASE("disjoint cauchy sketches disagree on half the bits") {
    const SketchConfig cfg{100000, 1.0, 2024};
    const auto u = sv(4, {{0, 1.0}, {1, 2.0}});
    const auto v = sv(4, {{2, 3.0}, {3, 1.0}});
    const double cf = collision_fraction(sketch(u, cfg), sketch(v, cfg));
    CHECK(cf == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("alpha=2 collision fraction follows the arccosine law") {
    const SketchConfig cfg{100000, 2.0, 31337};
    const auto u = sv(3, {{0, 1.0}, {1, 1.0}});
    const auto v = sv(3, {{0, 1.0}, {2, 1.0}});
    const double p = std::acos(rho_2(u, v)) / 3.14159265358979323846;
    const double cf = collision_fraction(sketch(u, cfg), sketch(v, cfg));
    const double sigma = std::sqrt(p * (1.0 - p) / cfg.k);
    CHECK(std::abs(cf - p) <= 3.0 * sigma);
}

TEST_CASE("feature encoding maps signs to indicator pairs") {
    const SketchConfig cfg{3, 1.0, 1};
    const std::vector<double> x = {0.5, -0.5, 2.0};
    const auto s = SignSketch::from_projections(cfg, x);
    CHECK(encode_features(s) == std::vector<std::uint8_t>{1, 0, 0, 1, 1, 0});

    const SketchConfig cfg4{4, 1.0, 1};
    const std::vector<double> pos(4, 1.0);
    const auto sp = SignSketch::from_projections(cfg4, pos);
    CHECK(encode_features(sp) == std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0, 1, 0});
}

TEST_CASE("feature inner product equals the number of agreeing bits") {
    const SketchConfig cfg{640, 1.0, 88};
    const auto u = sv(5, {{0, 1.0}, {1, -2.0}, {4, 0.5}});
    const auto v = sv(5, {{1, 1.0}, {3, 1.0}});
    const auto su = sketch(u, cfg);
    const auto sve = sketch(v, cfg);
    const auto fu = encode_features(su);
    const auto fv = encode_features(sve);
    const auto dot = std::inner_product(fu.begin(), fu.end(), fv.begin(), 0u);
    const double cf = collision_fraction(su, sve);
    CHECK(static_cast<double>(dot) == doctest::Approx(cfg.k * (1.0 - cf)));
}

TEST_CASE("bucket codes read bit windows most significant first") {
    const SketchConfig cfg{8, 1.0, 1};
    // Projections (+,+,-,+,-,+,-,-): bits 1,1,0,1,0,1,0,0.
    const std::vector<double> x = {1, 1, -1, 1, -1, 1, -1, -1};
    const auto s = SignSketch::from_projections(cfg, x);
    // Window [0, 3): bits 1,1,0 -> binary 110 -> 6.
    CHECK(bucket_code(s, 0, 3) == 6);
    // Window [2, 5): bits 0,1,0 -> 2.
    CHECK(bucket_code(s, 2, 5 - 2) == 2);
    CHECK(bucket_code(s, 0, 8) == 0b11010100);

    const std::vector<double> neg(8, -1.0);
    CHECK(bucket_code(SignSketch::from_projections(cfg, neg), 0, 8) == 0);

    CHECK_THROWS_AS(bucket_code(s, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(bucket_code(s, 4, 5), std::invalid_argument);
    CHECK_THROWS_AS(bucket_code(s, 0, 65), std::invalid_argument);
}

TEST_CASE("stream state starts at sign zero everywhere") {
    const SketchConfig cfg{20, 1.0, 3};
    const StreamSketchState st(cfg);
    CHECK(st.sum_counter() == 0.0);
    const auto s = st.to_sketch();
    for (std::uint32_t j = 0; j < cfg.k; ++j) CHECK(s.bit(j));
}

TEST_CASE("streaming a vector in any order reproduces the batch sketch") {
    const SketchConfig cfg{333, 1.2, 555};
    const auto u = sv(12, {{0, 1.5}, {3, -2.0}, {5, 0.25}, {9, 4.0}, {11, -1.0}});

    StreamSketchState asc(cfg);
    for (const auto& [idx, val] : u.entries) asc.update(idx, val);
    CHECK(asc.to_sketch() == sketch(u, cfg));
    CHECK(asc.sum_counter() == u.sum());

    // Same elements, permuted and split into partial increments.
    StreamSketchState perm(cfg);
    perm.update(9, 4.0);
    perm.update(3, -0.5);
    perm.update(11, -1.0);
    perm.update(0, 1.5);
    perm.update(3, -1.5);
    perm.update(5, 0.25);
    CHECK(perm.to_sketch().bytes() == asc.to_sketch().bytes());
}

TEST_CASE("turnstile cancellation leaves a tiny residual and an exact counter") {
    const SketchConfig cfg{64, 1.0, 7};
    StreamSketchState st(cfg);
    st.update(2, 3.0);
    st.update(4, 5.0);
    st.update(4, -5.0);
    st.update(9, 1.0);
    CHECK(st.sum_counter() == 4.0);

    // The projected values should match the two-element vector up to
    // rounding from the cancelled updates.
    StreamSketchState direct(cfg);
    direct.update(2, 3.0);
    direct.update(9, 1.0);
    const auto a = st.projections();
    const auto b = direct.projections();
    for (std::uint32_t j = 0; j < cfg.k; ++j) {
        CHECK(std::abs(a[j] - b[j]) <= 1e-9 * (1.0 + std::abs(b[j])));
    }
}

TEST_CASE("sskb files round-trip") {
    const SketchConfig cfg{13, 1.7, 99};  // k=13 exercises the padding bits
    std::vector<SparseVector> vecs = {
        sv(5, {{0, 1.0}, {4, 2.0}}),
        sv(5, {{1, 3.0}}),
    };
    SketchFileData data;
    data.config = cfg;
    const auto batch = sketch_batch(vecs, cfg);
    data.sketches.push_back({"first", batch[0]});
    data.sketches.push_back({"second vec", batch[1]});

    std::stringstream buf;
    write_sskb(buf, data);
    const auto back = read_sskb(buf);
    CHECK(back.config == cfg);
    REQUIRE(back.sketches.size() == 2);
    CHECK(back.sketches[0].label == "first");
    CHECK(back.sketches[1].label == "second vec");
    CHECK(back.sketches[0].sketch == batch[0]);
    CHECK(back.sketches[1].sketch == batch[1]);
}

TEST_CASE("sskb rejects corrupt input") {
    const SketchConfig cfg{8, 1.0, 1};
    SketchFileData data;
    data.config = cfg;
    data.sketches.push_back({"x", sketch(sv(2, {{0, 1.0}}), cfg)});
    std::stringstream buf;
    write_sskb(buf, data);
    const std::string good = buf.str();

    {
        std::stringstream bad(std::string("XXKB") + good.substr(4));
        CHECK_THROWS_AS(read_sskb(bad), ParseError);
    }
    {
        std::string v2 = good;
        v2[4] = 2;  // unknown version byte
        std::stringstream bad(v2);
        CHECK_THROWS_AS(read_sskb(bad), ParseError);
    }
    {
        std::stringstream bad(good.substr(0, good.size() - 1));
        CHECK_THROWS_AS(read_sskb(bad), ParseError);
    }
    {
        std::stringstream bad(good.substr(0, 10));
        CHECK_THROWS_AS(read_sskb(bad), ParseError);
    }
}
