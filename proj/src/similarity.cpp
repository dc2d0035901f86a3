#include "signstable/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace signstable {

namespace {

// Visit the union of both supports in ascending index order; f(u_i, v_i)
// with the missing side passed as 0.
template <typename F>
void for_each_union(const SparseVector& u, const SparseVector& v, F&& f) {
    auto iu = u.entries.begin();
    auto iv = v.entries.begin();
    while (iu != u.entries.end() || iv != v.entries.end()) {
        if (iv == v.entries.end() || (iu != u.entries.end() && iu->first < iv->first)) {
            f(iu->second, 0.0);
            ++iu;
        } else if (iu == u.entries.end() || iv->first < iu->first) {
            f(0.0, iv->second);
            ++iv;
        } else {
            f(iu->second, iv->second);
            ++iu;
            ++iv;
        }
    }
}

void require_nonnegative(const SparseVector& u, const char* who) {
    if (!u.nonnegative()) {
        throw std::domain_error(std::string(who) + ": negative entry");
    }
}

void require_alpha(double alpha, const char* who) {
    if (!(alpha > 0.0) || !(alpha <= 2.0)) {
        throw std::invalid_argument(std::string(who) + ": alpha must be in (0, 2], got " +
                                    std::to_string(alpha));
    }
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double rho_2(const SparseVector& u, const SparseVector& v) {
    double dot = 0.0;
    for_each_union(u, v, [&](double a, double b) { dot += a * b; });
    double nu = 0.0, nv = 0.0;
    for (const auto& [i, a] : u.entries) nu += a * a;
    for (const auto& [i, b] : v.entries) nv += b * b;
    if (!(nu > 0.0) || !(nv > 0.0)) {
        throw std::domain_error("rho_2: zero-norm input");
    }
    return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

double d_alpha(const SparseVector& u, const SparseVector& v, double alpha) {
    require_alpha(alpha, "d_alpha");
    double s = 0.0;
    for_each_union(u, v, [&](double a, double b) {
        const double diff = std::fabs(a - b);
        if (diff != 0.0) s += std::pow(diff, alpha);
    });
    return s;
}

double rho_alpha(const SparseVector& u, const SparseVector& v, double alpha) {
    require_alpha(alpha, "rho_alpha");
    require_nonnegative(u, "rho_alpha");
    require_nonnegative(v, "rho_alpha");
    const double half = alpha / 2.0;
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (const auto& [i, a] : u.entries) nu += std::pow(a, alpha);
    for (const auto& [i, b] : v.entries) nv += std::pow(b, alpha);
    for_each_union(u, v, [&](double a, double b) {
        if (a > 0.0 && b > 0.0) dot += std::pow(a, half) * std::pow(b, half);
    });
    if (!(nu > 0.0) || !(nv > 0.0)) {
        throw std::domain_error("rho_alpha: vector with no positive entry");
    }
    return clamp01(std::pow(dot / std::sqrt(nu * nv), 2.0 / alpha));
}

double rho_chi2(const SparseVector& u, const SparseVector& v) {
    require_nonnegative(u, "rho_chi2");
    require_nonnegative(v, "rho_chi2");
    constexpr double kTol = 1e-9;
    if (std::fabs(u.sum() - 1.0) > kTol || std::fabs(v.sum() - 1.0) > kTol) {
        throw std::domain_error("rho_chi2: inputs must be normalized to sum 1 (within 1e-9)");
    }
    double s = 0.0;
    for_each_union(u, v, [&](double a, double b) {
        if (a > 0.0 && b > 0.0) s += 2.0 * a * b / (a + b);
    });
    return clamp01(s);
}

double d_chi2(const SparseVector& u, const SparseVector& v) {
    return 2.0 - 2.0 * rho_chi2(u, v);
}

BinaryProfile binary_profile(const SparseVector& u, const SparseVector& v) {
    require_nonnegative(u, "binary_profile");
    require_nonnegative(v, "binary_profile");
    BinaryProfile p;
    for_each_union(u, v, [&](double a, double b) {
        if (a > 0.0 && b > 0.0) {
            ++p.c;
        } else if (a > 0.0) {
            ++p.a;
        } else if (b > 0.0) {
            ++p.b;
        }
    });
    return p;
}

double rho_chi2_binary(const BinaryProfile& p) {
    const double denom = static_cast<double>(p.a) + static_cast<double>(p.b) + 2.0 * static_cast<double>(p.c);
    if (denom == 0.0) {
        throw std::domain_error("rho_chi2_binary: empty profile");
    }
    return 2.0 * static_cast<double>(p.c) / denom;
}

}  // namespace signstable
