#pragma once

#include <cmath>

#include "signstable/errors.hpp"

namespace signstable {

// Adaptive Simpson settings. The defaults are used everywhere analytic
// collision values are computed; the reported result is within abs_tol of
// the true integral for the smooth bounded integrands this project needs.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    int max_depth = 60;
};

namespace detail {

template <typename F>
double simpson_step(F&& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double fa, double b, double fb, double m, double fm,
                        double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_step(f, a, fa, m, fm, lm, flm);
    const double right = simpson_step(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) {
        throw NumericError("quadrature: max depth reached without convergence");
    }
    return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integral of f over [a, b] to within spec.abs_tol. Throws NumericError if
// the recursion depth runs out first (does not happen for the bounded
// integrands used here).
template <typename F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = detail::simpson_step(f, a, fa, b, fb, m, fm);
    return detail::adaptive_simpson(f, a, fa, b, fb, m, fm, whole, spec.abs_tol, spec.max_depth);
}

}  // namespace signstable
