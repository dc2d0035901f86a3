#include "signstable/collision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "signstable/errors.hpp"
#include "signstable/stable.hpp"

namespace signstable {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

void require_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
    }
}

// log1p(y)/y: the removable-singularity form of log(x)/(x - 1) at x = 1 + y.
double l1p(double y) {
    if (std::abs(y) < 1e-6) return 1.0 - y / 2.0 + y * y / 3.0;
    return std::log1p(y) / y;
}

McEstimate mean_and_se(double sum, double sumsq, std::size_t n, double scale) {
    const double mean = sum / static_cast<double>(n);
    double var = 0.0;
    if (n > 1) {
        var = (sumsq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
        var = std::max(var, 0.0);
    }
    return {scale * mean, std::abs(scale) * std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

double bound_acos(double rho) {
    require_unit_interval(rho, "rho");
    return std::acos(rho) / kPi;
}

double p_chi2_1(double rho_chi2) {
    require_unit_interval(rho_chi2, "rho_chi2");
    return std::acos(rho_chi2) / kPi;
}

double p_chi2_2(double rho_chi2, const QuadratureSpec& spec) {
    require_unit_interval(rho_chi2, "rho_chi2");
    if (rho_chi2 == 1.0) return 0.0;  // limit; q below would overflow
    const double q = rho_chi2 / (2.0 - 2.0 * rho_chi2);
    const double integral = integrate(
        [q](double t) { return std::atan2(q * std::sin(t), std::cos(t)); }, 0.0, kHalfPi, spec);
    return 0.5 - 2.0 / (kPi * kPi) * integral;
}

McEstimate collision_mixture_mc(const SparseVector& u, const SparseVector& v, double alpha,
                                std::size_t n_mc, const SeededRng& rng) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw std::invalid_argument(
            "collision_mixture_mc: alpha must be in (0, 2); use bound_acos(rho_2) at alpha = 2");
    }
    if (n_mc < 1) throw std::invalid_argument("collision_mixture_mc: n_mc must be >= 1");
    u.validate();
    v.validate();
    if (!u.nonnegative() || !v.nonnegative()) {
        throw std::domain_error("collision_mixture_mc: negative entry");
    }
    if (u.empty() || v.empty()) throw std::domain_error("collision_mixture_mc: zero vector");

    // Merged (u_i, v_i) value pairs over the support union; coordinates
    // outside both supports contribute nothing to any of the three sums.
    std::vector<std::pair<double, double>> merged;
    merged.reserve(u.entries.size() + v.entries.size());
    std::size_t iu = 0, iv = 0;
    while (iu < u.entries.size() || iv < v.entries.size()) {
        const std::size_t cu = iu < u.entries.size() ? u.entries[iu].first : SIZE_MAX;
        const std::size_t cv = iv < v.entries.size() ? v.entries[iv].first : SIZE_MAX;
        if (cu < cv) {
            merged.emplace_back(u.entries[iu++].second, 0.0);
        } else if (cv < cu) {
            merged.emplace_back(0.0, v.entries[iv++].second);
        } else {
            merged.emplace_back(u.entries[iu++].second, v.entries[iv++].second);
        }
    }

    const StableSampler skewed(factorization_skewed_params(alpha));
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t rep = 0; rep < n_mc; ++rep) {
        const SeededRng rep_rng = rng.fork(rep);
        double num = 0.0, du = 0.0, dv = 0.0;
        for (std::size_t s = 0; s < merged.size(); ++s) {
            const double t = skewed.sample_at(rep_rng, s);
            const auto& [uv, vv] = merged[s];
            num += uv * vv * t;
            du += uv * uv * t;
            dv += vv * vv * t;
        }
        const double rho_t = std::clamp(num / std::sqrt(du * dv), 0.0, 1.0);
        const double p = std::acos(rho_t) / kPi;
        sum += p;
        sumsq += p * p;
    }
    return mean_and_se(sum, sumsq, n_mc, 1.0);
}

namespace {

void require_profile(const BinaryProfile& p) {
    if (p.a + p.c < 1 || p.b + p.c < 1) {
        throw std::domain_error("binary profile: need a+c >= 1 and b+c >= 1");
    }
}

}  // namespace

double exact_binary(const BinaryProfile& profile, const QuadratureSpec& spec) {
    require_profile(profile);
    // Degenerate profiles are exact and would leave the integrand with a
    // jump at an endpoint (identical supports) or identically zero
    // (disjoint supports); skip the quadrature for both.
    if (profile.c == 0) return 0.5;
    if (profile.a == 0 && profile.b == 0) return 0.0;
    const double a = static_cast<double>(profile.a);
    const double b = static_cast<double>(profile.b);
    const double c = static_cast<double>(profile.c);
    // atan((c/a) tan θ) written as atan2(c sin θ, a cos θ) so a = 0 and
    // θ = π/2 need no special cases.
    const double integral = integrate(
        [a, b, c](double th) {
            const double s = std::sin(th);
            const double co = std::cos(th);
            return std::atan2(c * s, a * co) * std::atan2(c * s, b * co);
        },
        0.0, kHalfPi, spec);
    return 0.5 - 4.0 / (kPi * kPi * kPi) * integral;
}

McEstimate exact_binary_mc(const BinaryProfile& profile, std::size_t n_mc, const SeededRng& rng) {
    require_profile(profile);
    if (n_mc < 1) throw std::invalid_argument("exact_binary_mc: n_mc must be >= 1");
    const double a = static_cast<double>(profile.a);
    const double b = static_cast<double>(profile.b);
    const double c = static_cast<double>(profile.c);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i) {
        const double r = std::abs(std::tan(kPi * (rng.uniform_at(i) - 0.5)));
        const double g = std::atan2(c * r, a) * std::atan2(c * r, b);
        sum += g;
        sumsq += g * g;
    }
    auto [mean, se] = mean_and_se(sum, sumsq, n_mc, 2.0 / (kPi * kPi));
    return {0.5 - mean, se};
}

double error_surface(double t1, double t2, const QuadratureSpec& spec) {
    if (!(t1 >= 0.0) || !(t2 >= 0.0) || !std::isfinite(t1) || !std::isfinite(t2)) {
        throw std::domain_error("error_surface: t1, t2 must be finite and >= 0");
    }
    // Fused integrand for  exact_binary - p_chi2_2  at (a/c, b/c) = (t1, t2):
    // the chi-square similarity there is 2/(t1+t2+2), whose integral term
    // reduces to atan(tan θ / (t1+t2)). Integrating the difference keeps the
    // ~1e-2 result clear of cancellation between two ~0.5 halves.
    const double ts = t1 + t2;
    const double integral = integrate(
        [t1, t2, ts](double th) {
            const double s = std::sin(th);
            const double co = std::cos(th);
            const double a1 = std::atan2(s, t1 * co);
            const double a2 = std::atan2(s, t2 * co);
            const double a12 = std::atan2(s, ts * co);
            return a12 / kPi - 2.0 / (kPi * kPi) * a1 * a2;
        },
        0.0, kHalfPi, spec);
    return 2.0 / kPi * integral;
}

double h_function(double t) {
    if (!(t > 0.0)) throw std::domain_error("h_function: t must be > 0");
    // log(2t/(1+t))/(t^2-1) - log(2t)/(4t^2-1) with both removable
    // singularities (t = 1, t = 1/2) absorbed into l1p.
    const double y1 = (t - 1.0) / (1.0 + t);
    const double y2 = 2.0 * t - 1.0;
    return l1p(y1) / ((1.0 + t) * (1.0 + t)) - l1p(y2) / (2.0 * t + 1.0);
}

double find_t_star() {
    double lo = 1.5, hi = 5.0;
    if (!(h_function(lo) > 0.0 && h_function(hi) < 0.0)) {
        throw NumericError("find_t_star: [1.5, 5] does not bracket the root");
    }
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (h_function(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Derivative of the approximation gap g(z) = p_chi2_1(z) - p_chi2_2(z):
//   -(1/π)(1-z²)^{-1/2} + (2/π²) log(z²/(4(1-z)²)) / (z² - 4(1-z)²),
// second term rewritten through l1p so z = 2/3 is regular.
double g_prime(double z) {
    const double s = z / (2.0 - 2.0 * z);
    const double om = 1.0 - z;
    return -1.0 / (kPi * std::sqrt(1.0 - z * z)) +
           2.0 / (kPi * kPi) * l1p(s * s - 1.0) / (4.0 * om * om);
}

}  // namespace

std::array<double, 3> g_prime_extrema() {
    constexpr double lo = 1e-4;
    constexpr double hi = 1.0 - 1e-7;
    constexpr int n = 4000;
    std::vector<double> roots;
    double prev_z = lo;
    double prev_f = g_prime(lo);
    for (int i = 1; i <= n; ++i) {
        const double z = lo + (hi - lo) * i / n;
        const double f = g_prime(z);
        if ((prev_f > 0.0) != (f > 0.0)) {
            double a = prev_z, b = z, fa = prev_f;
            while (b - a > 1e-12) {
                const double m = 0.5 * (a + b);
                const double fm = g_prime(m);
                if ((fa > 0.0) == (fm > 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_z = z;
        prev_f = f;
    }
    if (roots.size() != 3) {
        throw NumericError("g_prime_extrema: expected 3 roots, found " +
                           std::to_string(roots.size()));
    }
    return {roots[0], roots[1], roots[2]};
}

double estimate_rho_chi2(double p_hat) {
    require_unit_interval(p_hat, "p_hat");
    if (p_hat >= 0.5) return 0.0;
    return std::cos(kPi * p_hat);
}

namespace {

// Fill a symmetric matrix with unit diagonal from a pure cell function over
// the upper triangle. Cells are strided across threads; every cell is an
// independent write, so the result does not depend on the split.
template <typename Cell>
std::vector<std::vector<double>> fill_symmetric(std::size_t m, unsigned threads, Cell cell) {
    std::vector<std::vector<double>> k(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) k[i][i] = 1.0;

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    cells.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) cells.emplace_back(i, j);
    }

    const unsigned nt = std::max(1u, threads);
    auto work = [&](unsigned tid) {
        for (std::size_t c = tid; c < cells.size(); c += nt) {
            const auto [i, j] = cells[c];
            const double v = cell(i, j);
            k[i][j] = v;
            k[j][i] = v;
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
    return k;
}

}  // namespace

std::vector<std::vector<double>> kernel_matrix(std::span<const SparseVector> vectors,
                                               KernelKind kind, unsigned threads) {
    // Validate up front (normalization, nonnegativity) so worker threads
    // cannot throw: rho_chi2 of a vector with itself exercises exactly the
    // checks every off-diagonal cell would.
    for (const auto& v : vectors) (void)rho_chi2(v, v);
    return fill_symmetric(vectors.size(), threads, [&vectors, kind](std::size_t i, std::size_t j) {
        const double rho = rho_chi2(vectors[i], vectors[j]);
        return kind == KernelKind::chi2 ? rho : 1.0 - std::acos(rho) / kPi;
    });
}

std::vector<std::vector<double>> kernel_matrix_estimated(std::span<const SignSketch> sketches,
                                                         unsigned threads) {
    for (const auto& s : sketches) {
        if (!(s.config() == sketches.front().config())) {
            throw std::invalid_argument("kernel: sketches have differing configs");
        }
    }
    return fill_symmetric(sketches.size(), threads, [&sketches](std::size_t i, std::size_t j) {
        return estimate_rho_chi2(collision_fraction(sketches[i], sketches[j]));
    });
}

void write_kernel_matrix(std::ostream& out, std::span<const std::string> labels,
                         const std::vector<std::vector<double>>& matrix) {
    if (labels.size() != matrix.size()) {
        throw std::invalid_argument("kernel export: label/row count mismatch");
    }
    char buf[48];
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (matrix[i].size() != matrix.size()) {
            throw std::invalid_argument("kernel export: matrix not square");
        }
        out << labels[i] << " 0:" << i + 1;
        for (std::size_t j = 0; j < matrix[i].size(); ++j) {
            std::snprintf(buf, sizeof(buf), " %zu:%.17g", j + 1, matrix[i][j]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace signstable
