#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace signstable {

// Sparse vector over [0, dim): strictly increasing indices, no explicit
// zeros stored.
struct SparseVector {
    std::size_t dim = 0;
    std::vector<std::pair<std::size_t, double>> entries;

    SparseVector() = default;
    SparseVector(std::size_t dim, std::vector<std::pair<std::size_t, double>> entries);

    bool empty() const noexcept { return entries.empty(); }

    // Throws std::invalid_argument on descending/duplicate indices,
    // out-of-range indices, stored zeros, or non-finite values.
    void validate() const;

    double sum() const noexcept;
    bool nonnegative() const noexcept;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// Entries rescaled to sum to one. Throws std::domain_error on a negative
// entry or an all-zero vector.
SparseVector normalize(const SparseVector& u);

struct LabeledVector {
    std::string label;
    SparseVector vec;
};

// Text format shared by all tools: one vector per line,
//   label idx:val idx:val ...
// with 1-based strictly ascending indices. Duplicate or descending indices
// are rejected (ParseError). Blank lines and lines starting with '#' are
// skipped. dim of each parsed vector is its own largest index unless
// min_dim raises it.
std::vector<LabeledVector> parse_vector_file(std::istream& in, std::size_t min_dim = 0);
std::vector<LabeledVector> load_vector_file(const std::string& path, std::size_t min_dim = 0);

void write_vector_line(std::ostream& out, const LabeledVector& v);

}  // namespace signstable
