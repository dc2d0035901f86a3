#include "signstable/sparse_vector.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "signstable/errors.hpp"

namespace signstable {

SparseVector::SparseVector(std::size_t dim_, std::vector<std::pair<std::size_t, double>> entries_)
    : dim(dim_), entries(std::move(entries_)) {
    validate();
}

void SparseVector::validate() const {
    std::size_t prev = 0;
    bool first = true;
    for (const auto& [idx, val] : entries) {
        if (!first && idx <= prev) {
            throw std::invalid_argument("sparse vector: indices must be strictly increasing");
        }
        if (idx >= dim) {
            throw std::invalid_argument("sparse vector: index " + std::to_string(idx) +
                                        " out of range for dim " + std::to_string(dim));
        }
        if (val == 0.0) {
            throw std::invalid_argument("sparse vector: explicit zero entry at index " + std::to_string(idx));
        }
        if (!std::isfinite(val)) {
            throw std::invalid_argument("sparse vector: non-finite value at index " + std::to_string(idx));
        }
        prev = idx;
        first = false;
    }
}

double SparseVector::sum() const noexcept {
    double s = 0.0;
    for (const auto& [idx, val] : entries) s += val;
    return s;
}

bool SparseVector::nonnegative() const noexcept {
    for (const auto& [idx, val] : entries) {
        if (val < 0.0) return false;
    }
    return true;
}

SparseVector normalize(const SparseVector& u) {
    if (!u.nonnegative()) {
        throw std::domain_error("normalize: negative entry");
    }
    const double s = u.sum();
    if (!(s > 0.0)) {
        throw std::domain_error("normalize: all-zero vector");
    }
    SparseVector out = u;
    for (auto& [idx, val] : out.entries) val /= s;
    return out;
}

std::vector<LabeledVector> parse_vector_file(std::istream& in, std::size_t min_dim) {
    std::vector<LabeledVector> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string label;
        if (!(ls >> label) || label[0] == '#') continue;

        LabeledVector lv;
        lv.label = label;
        std::string tok;
        std::size_t prev_idx = 0;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
                throw ParseError("line " + std::to_string(line_no) + ": bad entry '" + tok + "'");
            }
            std::size_t idx;
            double val;
            try {
                std::size_t pos_i = 0, pos_v = 0;
                const std::string idx_str = tok.substr(0, colon);
                const std::string val_str = tok.substr(colon + 1);
                idx = std::stoull(idx_str, &pos_i);
                val = std::stod(val_str, &pos_v);
                if (pos_i != idx_str.size() || pos_v != val_str.size()) {
                    throw std::invalid_argument("trailing garbage");
                }
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(line_no) + ": bad entry '" + tok + "'");
            }
            if (idx == 0) {
                throw ParseError("line " + std::to_string(line_no) + ": indices are 1-based");
            }
            if (idx <= prev_idx) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": duplicate or descending index " + std::to_string(idx));
            }
            if (!std::isfinite(val)) {
                throw ParseError("line " + std::to_string(line_no) + ": non-finite value");
            }
            prev_idx = idx;
            if (val != 0.0) lv.vec.entries.emplace_back(idx - 1, val);
        }
        lv.vec.dim = std::max(prev_idx, min_dim);
        out.push_back(std::move(lv));
    }
    return out;
}

std::vector<LabeledVector> load_vector_file(const std::string& path, std::size_t min_dim) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open vector file: " + path);
    return parse_vector_file(in, min_dim);
}

void write_vector_line(std::ostream& out, const LabeledVector& v) {
    out << v.label;
    char buf[40];
    for (const auto& [idx, val] : v.vec.entries) {
        std::snprintf(buf, sizeof(buf), " %zu:%.17g", idx + 1, val);
        out << buf;
    }
    out << '\n';
}

}  // namespace signstable
