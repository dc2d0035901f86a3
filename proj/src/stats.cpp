#include "signstable/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace signstable {

double two_sample_ks(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < sa.size() && ib < sb.size()) {
        const double x = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] <= x) ++ia;
        while (ib < sb.size() && sb[ib] <= x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    return d;
}

namespace {

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1}
// exp(-2 j^2 lambda^2); alternating and rapidly convergent for lambda
// bounded away from 0.
double kolmogorov_survival(double lambda) {
    double q = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        q += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return 2.0 * q;
}

}  // namespace

double ks_critical(double level, std::size_t n, std::size_t m) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("ks: level must be in (0, 1)");
    if (n == 0 || m == 0) throw std::invalid_argument("ks: empty sample");
    double lo = 0.2, hi = 5.0;  // Q(0.2) ~ 1, Q(5) ~ 0; Q decreasing
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_survival(mid) > level ? lo : hi) = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    return lambda * std::sqrt((nd + md) / (nd * md));
}

}  // namespace signstable
