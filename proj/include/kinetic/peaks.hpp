// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "core.hpp"
#include "density.hpp"

namespace kinetic {

struct PeakReport {
    std::vector<double> locations;  ///< increasing
    std::vector<double> heights;
    std::vector<double> prominences;
    double threshold = 0;  ///< absolute prominence threshold used

    std::size_t count() const { return locations.size(); }
};

namespace detail {

/// Indices of interior local maxima; a flat top counts once, at its leftmost
/// node, when both neighbours of the plateau are lower.
inline std::vector<std::size_t> local_maxima(const std::vector<double>& y)
{
    std::vector<std::size_t> out;
    const std::size_t n = y.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (y[i - 1] < y[i]) {
            std::size_t j = i;
            while (j + 1 < n && y[j + 1] == y[i])
                ++j;
            if (j + 1 < n && y[j + 1] < y[i]) {
                out.push_back(i);
                i = j + 1;
                continue;
            }
            i = j + 1;
            continue;
        }
        ++i;
    }
    return out;
}

/// Topographic prominence: height above the higher of the two lowest points
/// reached before meeting strictly higher ground (or the grid end) on either
/// side.
inline double prominence(const std::vector<double>& y, std::size_t peak)
{
    const double h = y[peak];
    double left = h;
    for (std::size_t i = peak; i-- > 0;) {
        if (y[i] > h)
            break;
        left = std::min(left, y[i]);
    }
    double right = h;
    for (std::size_t i = peak + 1; i < y.size(); ++i) {
        if (y[i] > h)
            break;
        right = std::min(right, y[i]);
    }
    return h - std::max(left, right);
}

}  // namespace detail

/// Peaks of a sampled density whose prominence is at least
/// prominence_rel * max(values).
inline PeakReport count_peaks(const std::vector<double>& x,
                              const std::vector<double>& values,
                              double prominence_rel = 0.01)
{
    if (x.size() != values.size())
        throw ParameterError("abscissae and values differ in length");
    if (!(prominence_rel >= 0) || !(prominence_rel < 1))
        throw ParameterError("relative prominence must lie in [0, 1)");
    PeakReport r;
    if (values.empty())
        return r;
    r.threshold = prominence_rel * *std::max_element(values.begin(), values.end());
    for (std::size_t i : detail::local_maxima(values)) {
        const double p = detail::prominence(values, i);
        if (p >= r.threshold && p > 0) {
            r.locations.push_back(x[i]);
            r.heights.push_back(values[i]);
            r.prominences.push_back(p);
        }
    }
    return r;
}

inline PeakReport count_peaks(const DensityGrid& d, double prominence_rel = 0.01)
{
    return count_peaks(d.x, d.values, prominence_rel);
}

}  // namespace kinetic
