// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Damkohler scans for the double-peak region of the free-phase profile.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "csv.hpp"
#include "density.hpp"
#include "parallel.hpp"
#include "peaks.hpp"

namespace kinetic {

struct ScanConfig {
    double floor = 0.01;
    double ceiling = 2.0;
    double step = 0.01;
    double refine = 0.005;  ///< probe between the last pass and first failure; 0 = off
    double prominence_rel = 5e-5;
    bool inject = false;  ///< smear the pulse over [0, L] before peak counting
    std::size_t nx = 4000;
    std::size_t n = 400;
    double R = 2;
    double Pe = 100;
    double L = 1;
    double v = 1;
    unsigned workers = 0;

    void validate() const
    {
        if (!(floor > 0) || !(ceiling > floor) || !(step > 0) || !(refine >= 0))
            throw ParameterError("scan needs 0 < floor < ceiling and a positive step");
        if (nx < 3 || n < 1)
            throw ParameterError("scan needs nx >= 3 and n >= 1");
    }
};

struct ScanResult {
    double t_star = 0;
    double Da_I_max = 0;  ///< meaningful only if found
    bool found = false;
    bool non_monotone = false;  ///< two peaks reappear above Da_I_max
    std::vector<std::pair<double, std::size_t>> evaluations;  ///< (Da_I, peaks), ascending
};

/// Nodes covering [-8 sd(dt), v t + L + 8 sd(t)] for the n-step free profile.
inline Grid profile_grid(const DiscreteParams& dp, const KineticParams& p, double L, std::size_t nx)
{
    const double lo = -8 * std::sqrt(2 * p.D() * dp.dt());
    const double hi = p.v() * dp.t() + L + 8 * std::sqrt(2 * p.D() * dp.t());
    return Grid(lo, hi, nx);
}

/// Free-phase profile at ι = (1, 0) for an engineering parameter point.
inline DensityGrid free_profile(const EngineeringParams& ep,
                                std::size_t n,
                                std::size_t nx,
                                bool inject,
                                unsigned workers = 1)
{
    ep.validate();
    const TranslatedParams tp = translate_engineering(ep);
    const DiscreteParams dp(n, tp.t, tp.params);
    const InitialDistribution iota(1.0);
    const Grid g = profile_grid(dp, tp.params, ep.L, nx);
    return inject ? injected_density(dp, g, ep.L, iota, tp.params, workers)
                  : discrete_mixture_density(dp, g, iota, tp.params, workers);
}

inline std::size_t peak_count_at(double Da_I, double t_star, const ScanConfig& cfg)
{
    const EngineeringParams ep{cfg.Pe, Da_I, t_star, cfg.R, cfg.L, cfg.v};
    return count_peaks(free_profile(ep, cfg.n, cfg.nx, cfg.inject), cfg.prominence_rel).count();
}

/// Largest Da_I on the scan grid such that every grid point from the floor up
/// to it shows at least two peaks, refined by one probe towards the first
/// failing point.
inline ScanResult damkohler_scan(double t_star, const ScanConfig& cfg = {})
{
    cfg.validate();
    const auto m = static_cast<std::size_t>(std::floor((cfg.ceiling - cfg.floor) / cfg.step + 1e-9)) + 1;
    std::vector<double> da(m);
    for (std::size_t k = 0; k < m; ++k)
        da[k] = cfg.floor + static_cast<double>(k) * cfg.step;
    std::vector<std::size_t> peaks(m);
    parallel_for(m, [&](std::size_t k) { peaks[k] = peak_count_at(da[k], t_star, cfg); }, cfg.workers);

    ScanResult r;
    r.t_star = t_star;
    std::size_t first_fail = m;
    for (std::size_t k = 0; k < m; ++k) {
        r.evaluations.emplace_back(da[k], peaks[k]);
        if (first_fail == m && peaks[k] < 2)
            first_fail = k;
    }
    if (first_fail == 0)
        return r;
    r.found = true;
    r.Da_I_max = da[first_fail - 1];
    if (first_fail < m) {
        for (std::size_t k = first_fail + 1; k < m; ++k)
            r.non_monotone = r.non_monotone || peaks[k] >= 2;
        if (cfg.refine > 0 && cfg.refine < cfg.step) {
            for (double d = r.Da_I_max + cfg.refine; d < da[first_fail] - 1e-12; d += cfg.refine) {
                const std::size_t c = peak_count_at(d, t_star, cfg);
                r.evaluations.emplace_back(d, c);
                if (c < 2)
                    break;
                r.Da_I_max = d;
            }
            std::sort(r.evaluations.begin(), r.evaluations.end());
        }
    }
    return r;
}

inline constexpr std::array<double, 13> table1_t_star = {
    1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};

inline std::vector<ScanResult> table1(const ScanConfig& cfg = {})
{
    std::vector<ScanResult> out;
    for (double ts : table1_t_star)
        out.push_back(damkohler_scan(ts, cfg));
    return out;
}

/// Writes the two-row table: t_star, then Da_I_max (NaN if none found).
inline void write_table_csv(std::ostream& os, const std::vector<ScanResult>& rows)
{
    CsvWriter w(os);
    std::vector<std::string> head{"quantity"}, t{"t_star"}, da{"Da_I_max"}, flag{"non_monotone"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        head.push_back("c" + std::to_string(i));
        t.push_back(format_real(rows[i].t_star));
        da.push_back(format_real(rows[i].found ? rows[i].Da_I_max : std::nan("")));
        flag.push_back(rows[i].non_monotone ? "1" : "0");
    }
    w.header(head);
    w.row(t);
    w.row(da);
    w.row(flag);
}

struct ProfilePanel {
    double Da_I;
    double t_star;
};

inline constexpr std::array<ProfilePanel, 3> figure3_panels = {
    ProfilePanel{0.1, 3.6}, ProfilePanel{0.33, 3.2}, ProfilePanel{1.0, 3.0}};

struct Profile {
    DensityGrid density;  ///< unnormalized injected free density
    std::vector<double> normalized;  ///< density / max(density)
    double mass = 0;
};

/// Injected free profile at one panel, scaled to unit maximum.
inline Profile figure3(const ProfilePanel& panel, const ScanConfig& cfg = {})
{
    const EngineeringParams ep{cfg.Pe, panel.Da_I, panel.t_star, cfg.R, cfg.L, cfg.v};
    Profile out;
    out.density = free_profile(ep, cfg.n, cfg.nx, true, cfg.workers);
    out.mass = out.density.mass();
    const double top = out.density.max_value();
    if (!(top > 0))
        throw NumericError("profile has no positive value");
    out.normalized = out.density.values;
    for (double& v : out.normalized)
        v /= top;
    return out;
}

inline void write_csv(std::ostream& os, const Profile& prof, const ProfilePanel& panel)
{
    CsvWriter w(os);
    w.meta("Da_I", panel.Da_I).meta("t_star", panel.t_star).meta("mass", prof.mass);
    w.header({"x", "normalized_density"});
    for (std::size_t i = 0; i < prof.normalized.size(); ++i)
        w.row({prof.density.x[i], prof.normalized[i]});
}

}  // namespace kinetic
