#pragma once

#include <cstddef>
#include <span>

namespace signstable {

// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the pooled
// sample. Inputs need not be sorted. Throws std::invalid_argument on an
// empty sample.
double two_sample_ks(std::span<const double> a, std::span<const double> b);

// Rejection threshold for the two-sample KS statistic at significance
// `level` (e.g. 0.001), using the asymptotic Kolmogorov distribution:
// lambda(level) * sqrt((n+m)/(n*m)).
double ks_critical(double level, std::size_t n, std::size_t m);

}  // namespace signstable
