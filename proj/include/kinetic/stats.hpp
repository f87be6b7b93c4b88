// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "core.hpp"

namespace kinetic {

struct SampleStats {
    std::size_t count = 0;
    double mean = 0;
    double variance = 0;  ///< unbiased
    double se_mean = 0;
    double se_variance = 0;  ///< from the fourth central moment
};

/// Two-pass summary in index order, so the result is reproducible.
inline SampleStats sample_stats(const std::vector<double>& x)
{
    SampleStats s;
    s.count = x.size();
    if (x.empty())
        throw DomainError("summary of an empty sample");
    const double n = static_cast<double>(x.size());
    double sum = 0;
    for (double v : x)
        sum += v;
    s.mean = sum / n;
    double m2 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    if (x.size() > 1) {
        s.variance = m2 / (n - 1);
        s.se_mean = std::sqrt(s.variance / n);
        const double mu2 = m2 / n, mu4 = m4 / n;
        s.se_variance = std::sqrt(std::max(0.0, (mu4 - mu2 * mu2 * (n - 3) / (n - 1)) / n));
    }
    return s;
}

/// sup |F_a - F_b| of two empirical distribution functions.
inline double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty())
        throw DomainError("KS statistic needs two nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x)
            ++i;
        while (j < b.size() && b[j] == x)
            ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

/// Large-sample critical value of the two-sample KS statistic at level
/// alpha: sqrt(-ln(alpha / 2) / 2) * sqrt((n + m) / (n m)).
inline double ks_critical(double alpha, std::size_t n, std::size_t m)
{
    const double c = std::sqrt(-std::log(alpha / 2) / 2);
    const double nd = static_cast<double>(n), md = static_cast<double>(m);
    return c * std::sqrt((nd + md) / (nd * md));
}

}  // namespace kinetic
