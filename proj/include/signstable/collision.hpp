#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "signstable/quadrature.hpp"
#include "signstable/rng.hpp"
#include "signstable/similarity.hpp"
#include "signstable/sketch.hpp"
#include "signstable/sparse_vector.hpp"

namespace signstable {

// Monte Carlo result: point estimate plus its standard error.
struct McEstimate {
    double value = 0.0;
    double std_err = 0.0;
};

// Upper bound on the sign-collision probability: acos(rho)/pi. Also the
// exact probability at alpha = 2 with rho = rho_2. Throws std::domain_error
// for rho outside [0, 1].
double bound_acos(double rho);

// First chi-square approximation: acos(rho_chi2)/pi.
double p_chi2_1(double rho_chi2);

// Second chi-square approximation:
//   1/2 - (2/pi^2) * Int_0^{pi/2} atan( rho/(2-2rho) * tan t ) dt,
// evaluated by adaptive quadrature; rho_chi2 = 1 returns the limit 0.
double p_chi2_2(double rho_chi2, const QuadratureSpec& spec = {});

// Monte Carlo evaluation of the exact collision probability through the
// mixture representation: average over draws T_i of acos of the
// T-weighted correlation, divided by pi. Requires nonnegative vectors and
// alpha in (0, 2); alpha = 2 is rejected because bound_acos(rho_2) is
// already exact there.
McEstimate collision_mixture_mc(const SparseVector& u, const SparseVector& v, double alpha,
                                std::size_t n_mc, const SeededRng& rng);

// Exact collision probability for binary data with support counts
// (a, b, c), by quadrature over the folded Cauchy expectation:
//   1/2 - (2/pi^2) E{ atan((c/a)|R|) atan((c/b)|R|) }.
// Requires a + c >= 1 and b + c >= 1.
double exact_binary(const BinaryProfile& profile, const QuadratureSpec& spec = {});

// Monte Carlo cross-check of exact_binary over n_mc standard Cauchy draws.
McEstimate exact_binary_mc(const BinaryProfile& profile, std::size_t n_mc, const SeededRng& rng);

// Approximation error Z(t1, t2) = exact binary probability minus the
// second chi-square approximation, in the (t1, t2) = (a/c, b/c)
// parameterization. The two pieces are combined into one integrand before
// quadrature so the small difference is not lost to cancellation.
// Z is 0 on the axes and peaks at t1 = t2 = t_star.
double error_surface(double t1, double t2, const QuadratureSpec& spec = {});

// Derivative factor along the diagonal of the error surface:
//   h(t) = log(2t/(1+t))/(t^2-1) - log(2t)/(4t^2-1),
// with the removable singularities at t = 1 and t = 1/2 evaluated by
// series. h > 0 below t_star, h < 0 above.
double h_function(double t);

// Root of h on [1.5, 5]: the diagonal argument maximizing Z. Approximately
// 2.7793457703.
double find_t_star();

// The three stationary points in (0, 1) of the gap
// g(z) = p_chi2_1(z) - p_chi2_2(z), found as roots of g'. Approximately
// (0.30555, 0.38291, 0.95094); throws NumericError if the scan does not
// find exactly three. g > 0 at each, which certifies p_chi2_2 <= p_chi2_1.
std::array<double, 3> g_prime_extrema();

// Invert the first approximation: rho estimate from an observed collision
// fraction. Returns cos(pi * p_hat), clamped to 0 for p_hat >= 1/2 so
// sampling noise cannot produce a negative similarity.
double estimate_rho_chi2(double p_hat);

enum class KernelKind { chi2, acos_chi2 };

// Dense m x m similarity matrix over normalized nonnegative vectors:
// chi2 -> rho_chi2, acos_chi2 -> 1 - acos(rho_chi2)/pi. Diagonal is set to
// exactly 1. threads > 1 splits the upper triangle; output is independent
// of the split.
std::vector<std::vector<double>> kernel_matrix(std::span<const SparseVector> vectors,
                                               KernelKind kind, unsigned threads = 1);

// Estimated chi-square kernel from sign sketches: off-diagonals are
// estimate_rho_chi2(collision_fraction), diagonal exactly 1.
std::vector<std::vector<double>> kernel_matrix_estimated(std::span<const SignSketch> sketches,
                                                         unsigned threads = 1);

// Precomputed-kernel text layout: one row per vector,
//   label 0:serial 1:k11 2:k12 ...
// where serial is the 1-based row number; 17 significant digits.
void write_kernel_matrix(std::ostream& out, std::span<const std::string> labels,
                         const std::vector<std::vector<double>>& matrix);

}  // namespace signstable
