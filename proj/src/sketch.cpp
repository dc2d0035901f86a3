#include "signstable/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "signstable/errors.hpp"

namespace signstable {

namespace {

std::size_t byte_count(std::uint32_t k) { return (static_cast<std::size_t>(k) + 7) / 8; }

StableParams unit_symmetric(double alpha) { return StableParams{alpha, 0, 1.0}; }

void accumulate_row(const StableSampler& sampler, const SeededRng& rng, double coeff,
                    std::span<double> x, std::span<double> scratch) {
    sampler.sample_into(rng, scratch);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += coeff * scratch[j];
}

}  // namespace

void SketchConfig::validate() const {
    if (k < 1) throw std::invalid_argument("sketch config: k must be >= 1");
    StableParams{alpha, 0, 1.0}.validate();
}

SeededRng row_rng(const SketchConfig& config, std::uint64_t i) {
    return SeededRng{config.master_seed, avalanche(config.master_seed + i * kGoldenGamma)};
}

std::vector<double> project_row(const SketchConfig& config, std::uint64_t i) {
    config.validate();
    return StableSampler(unit_symmetric(config.alpha)).sample(row_rng(config, i), config.k);
}

SignSketch::SignSketch(SketchConfig config, std::vector<std::uint8_t> bits)
    : config_(config), bits_(std::move(bits)) {
    config_.validate();
    if (bits_.size() != byte_count(config_.k)) {
        throw std::invalid_argument("sign sketch: bit array length mismatch");
    }
}

SignSketch SignSketch::from_projections(const SketchConfig& config, std::span<const double> x) {
    if (x.size() != config.k) {
        throw std::invalid_argument("sign sketch: projection length mismatch");
    }
    std::vector<std::uint8_t> bits(byte_count(config.k), 0);
    for (std::uint32_t j = 0; j < config.k; ++j) {
        if (x[j] >= 0.0) bits[j >> 3] |= static_cast<std::uint8_t>(1u << (j & 7));
    }
    return SignSketch(config, std::move(bits));
}

SignSketch sketch(const SparseVector& u, const SketchConfig& config) {
    config.validate();
    if (u.empty()) throw std::domain_error("sketch: empty vector");
    const StableSampler sampler(unit_symmetric(config.alpha));
    std::vector<double> x(config.k, 0.0);
    std::vector<double> scratch(config.k);
    for (const auto& [i, val] : u.entries) {
        accumulate_row(sampler, row_rng(config, i), val, x, scratch);
    }
    return SignSketch::from_projections(config, x);
}

std::vector<SignSketch> sketch_batch(std::span<const SparseVector> vectors, const SketchConfig& config) {
    config.validate();
    const std::size_t m = vectors.size();
    for (const auto& v : vectors) {
        if (v.empty()) throw std::domain_error("sketch: empty vector");
    }

    // Inverted index over the support union: coordinate -> (vector, value).
    struct Triple {
        std::size_t coord;
        std::size_t vec;
        double val;
    };
    std::vector<Triple> triples;
    std::size_t nnz = 0;
    for (const auto& v : vectors) nnz += v.entries.size();
    triples.reserve(nnz);
    for (std::size_t vi = 0; vi < m; ++vi) {
        for (const auto& [i, val] : vectors[vi].entries) triples.push_back({i, vi, val});
    }
    std::stable_sort(triples.begin(), triples.end(),
                     [](const Triple& a, const Triple& b) { return a.coord < b.coord; });

    const StableSampler sampler(unit_symmetric(config.alpha));
    std::vector<std::vector<double>> x(m, std::vector<double>(config.k, 0.0));
    std::vector<double> scratch(config.k);
    std::size_t pos = 0;
    while (pos < triples.size()) {
        const std::size_t coord = triples[pos].coord;
        sampler.sample_into(row_rng(config, coord), scratch);
        for (; pos < triples.size() && triples[pos].coord == coord; ++pos) {
            auto& xv = x[triples[pos].vec];
            const double val = triples[pos].val;
            for (std::uint32_t j = 0; j < config.k; ++j) xv[j] += val * scratch[j];
        }
    }

    std::vector<SignSketch> out;
    out.reserve(m);
    for (std::size_t vi = 0; vi < m; ++vi) {
        out.push_back(SignSketch::from_projections(config, x[vi]));
    }
    return out;
}

std::uint32_t hamming_distance(const SignSketch& s1, const SignSketch& s2) {
    if (!(s1.config() == s2.config())) {
        throw std::invalid_argument("sketch comparison: configs differ");
    }
    const auto& a = s1.bytes();
    const auto& b = s2.bytes();
    std::uint32_t dist = 0;
    std::size_t i = 0;
    for (; i + 8 <= a.size(); i += 8) {
        std::uint64_t wa, wb;
        std::memcpy(&wa, a.data() + i, 8);
        std::memcpy(&wb, b.data() + i, 8);
        dist += static_cast<std::uint32_t>(std::popcount(wa ^ wb));
    }
    for (; i < a.size(); ++i) {
        dist += static_cast<std::uint32_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
    }
    return dist;
}

double collision_fraction(const SignSketch& s1, const SignSketch& s2) {
    return static_cast<double>(hamming_distance(s1, s2)) / static_cast<double>(s1.k());
}

std::vector<std::uint8_t> encode_features(const SignSketch& s) {
    std::vector<std::uint8_t> out(2 * static_cast<std::size_t>(s.k()), 0);
    for (std::uint32_t j = 0; j < s.k(); ++j) {
        out[2 * j + (s.bit(j) ? 0 : 1)] = 1;
    }
    return out;
}

std::uint64_t bucket_code(const SignSketch& s, std::uint32_t offset, std::uint32_t width) {
    if (width < 1 || width > 64 || offset > s.k() || s.k() - offset < width) {
        throw std::invalid_argument("bucket_code: window out of range");
    }
    std::uint64_t code = 0;
    for (std::uint32_t j = 0; j < width; ++j) {
        code = (code << 1) | static_cast<std::uint64_t>(s.bit(offset + j));
    }
    return code;
}

StreamSketchState::StreamSketchState(SketchConfig config)
    : config_(config),
      sampler_(unit_symmetric(config.alpha)),
      x_(config.k, 0.0),
      row_scratch_(config.k) {
    config_.validate();
}

void StreamSketchState::update(std::uint64_t i, double increment) {
    accumulate_row(sampler_, row_rng(config_, i), increment, x_, row_scratch_);
    sum_ += increment;
}

SignSketch StreamSketchState::to_sketch() const {
    return SignSketch::from_projections(config_, x_);
}

namespace {

constexpr char kMagic[4] = {'S', 'S', 'K', 'B'};
constexpr std::uint8_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    const std::uint8_t b[4] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                               static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

std::uint32_t get_u32(std::istream& in) {
    std::uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw ParseError("sskb: truncated file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& in) {
    std::uint8_t b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw ParseError("sskb: truncated file");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

double get_f64(std::istream& in) {
    const std::uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_sskb(std::ostream& out, const SketchFileData& data) {
    data.config.validate();
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    put_f64(out, data.config.alpha);
    put_u32(out, data.config.k);
    put_u64(out, data.config.master_seed);
    for (const auto& [label, sk] : data.sketches) {
        if (!(sk.config() == data.config)) {
            throw std::invalid_argument("sskb: sketch config differs from file header");
        }
        put_u32(out, static_cast<std::uint32_t>(label.size()));
        out.write(label.data(), static_cast<std::streamsize>(label.size()));
        out.write(reinterpret_cast<const char*>(sk.bytes().data()),
                  static_cast<std::streamsize>(sk.bytes().size()));
    }
    if (!out) throw ParseError("sskb: write failure");
}

SketchFileData read_sskb(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ParseError("sskb: bad magic");
    const int version = in.get();
    if (version != kVersion) throw ParseError("sskb: unsupported version " + std::to_string(version));

    SketchFileData data;
    data.config.alpha = get_f64(in);
    data.config.k = get_u32(in);
    data.config.master_seed = get_u64(in);
    data.config.validate();

    const std::size_t nbytes = byte_count(data.config.k);
    while (true) {
        const int peek = in.peek();
        if (peek == std::char_traits<char>::eof()) break;
        const std::uint32_t len = get_u32(in);
        std::string label(len, '\0');
        in.read(label.data(), len);
        std::vector<std::uint8_t> bits(nbytes);
        in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(nbytes));
        if (!in) throw ParseError("sskb: truncated record");
        if (data.config.k % 8 != 0) {
            bits.back() &= static_cast<std::uint8_t>((1u << (data.config.k % 8)) - 1);
        }
        data.sketches.push_back({std::move(label), SignSketch(data.config, std::move(bits))});
    }
    return data;
}

void save_sskb(const std::string& path, const SketchFileData& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path);
    write_sskb(out, data);
}

SketchFileData load_sskb(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open sketch file: " + path);
    return read_sskb(in);
}

}  // namespace signstable
