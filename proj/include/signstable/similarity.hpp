#pragma once

#include <cstddef>

#include "signstable/sparse_vector.hpp"

namespace signstable {

// Support-pattern counts for a nonnegative vector pair: a coordinates
// positive only in u, b positive only in v, c positive in both.
struct BinaryProfile {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t c = 0;

    friend bool operator==(const BinaryProfile&, const BinaryProfile&) = default;
};

// Correlation sum(u*v) / sqrt(sum(u^2) sum(v^2)), clamped to [-1, 1].
// Throws std::domain_error on a zero-norm input.
double rho_2(const SparseVector& u, const SparseVector& v);

// l_alpha distance sum |u_i - v_i|^alpha, alpha in (0, 2].
double d_alpha(const SparseVector& u, const SparseVector& v, double alpha);

// Generalized correlation
//   ( sum u^(a/2) v^(a/2) / sqrt(sum u^a sum v^a) )^(2/a)
// for nonnegative vectors; the similarity appearing in the sign-projection
// collision bound. Result clamped to [0, 1].
double rho_alpha(const SparseVector& u, const SparseVector& v, double alpha);

// Chi-square similarity sum 2*u*v/(u+v) for normalized nonnegative vectors
// (0/0 counts as 0; guaranteed by iterating the support union). Inputs must
// each sum to 1 within 1e-9 or a std::domain_error is thrown.
double rho_chi2(const SparseVector& u, const SparseVector& v);

// Chi-square distance, via the identity d = 2 - 2 * rho_chi2.
double d_chi2(const SparseVector& u, const SparseVector& v);

// Exact (a, b, c) support counts. Requires nonnegative vectors.
BinaryProfile binary_profile(const SparseVector& u, const SparseVector& v);

// rho_chi2 of the normalized binary pair with the given profile:
// 2c/(a+b+2c).
double rho_chi2_binary(const BinaryProfile& p);

}  // namespace signstable
