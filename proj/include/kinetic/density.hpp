// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Densities of S(t) by Fourier inversion of the closed-form characteristic
// functions, and the exact Gaussian mixtures of the n-step model.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "cf.hpp"
#include "core.hpp"
#include "csv.hpp"
#include "mbd.hpp"
#include "moments.hpp"
#include "parallel.hpp"

namespace kinetic {

/// Uniform grid of n nodes on [lo, hi].
struct Grid {
    double lo;
    double hi;
    std::size_t n;

    Grid(double lo_, double hi_, std::size_t n_) : lo(lo_), hi(hi_), n(n_)
    {
        if (!(hi > lo) || n < 2)
            throw ParameterError("grid needs lo < hi and at least 2 nodes");
    }
    double step() const { return (hi - lo) / static_cast<double>(n - 1); }
    double operator[](std::size_t i) const
    {
        return i + 1 == n ? hi : lo + static_cast<double>(i) * step();
    }
    std::vector<double> nodes() const
    {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = (*this)[i];
        return x;
    }
};

namespace detail {

// Trapezoid rule on nodes [i0, i1] of a uniform grid with the h^2/12 end
// correction from one-sided three-point derivatives.
inline double corrected_trapezoid(const std::vector<double>& f,
                                  std::size_t i0,
                                  std::size_t i1,
                                  double h)
{
    if (i1 <= i0)
        return 0.0;
    double s = 0.5 * (f[i0] + f[i1]);
    for (std::size_t i = i0 + 1; i < i1; ++i)
        s += f[i];
    s *= h;
    if (i1 - i0 >= 2) {
        const double da = (-3 * f[i0] + 4 * f[i0 + 1] - f[i0 + 2]) / (2 * h);
        const double db = (3 * f[i1] - 4 * f[i1 - 1] + f[i1 - 2]) / (2 * h);
        s -= h * h / 12 * (db - da);
    }
    return s;
}

}  // namespace detail

struct DensityGrid {
    std::vector<double> x;       ///< uniform nodes
    std::vector<double> values;  ///< continuous part; may carry tiny ripple
    double atom_weight = 0;      ///< point mass at x = 0
    PhaseSelector phase = PhaseSelector::total;
    double t = 0;
    /// Location of a derivative jump of the density, if any (the origin when
    /// the phase can have spent almost no time moving).
    double kink = std::numeric_limits<double>::quiet_NaN();

    /// Integral of the continuous part.
    double mass() const { return integrate(0); }

    /// Moment of order k, atom included.
    double moment(int k) const
    {
        return integrate(k) + (k == 0 ? atom_weight : 0.0);
    }

    double min_value() const
    {
        return values.empty() ? 0.0
                              : *std::min_element(values.begin(), values.end());
    }
    double max_value() const
    {
        return values.empty() ? 0.0
                              : *std::max_element(values.begin(), values.end());
    }
    /// Values with quadrature ripple in (-1e-6, 0) set to zero.
    std::vector<double> clamped() const
    {
        std::vector<double> out(values);
        for (double& v : out)
            v = std::max(v, 0.0);
        return out;
    }

  private:
    // End-corrected trapezoid, split at the kink when it sits on a node.
    double integrate(int k) const
    {
        const std::size_t n = x.size();
        if (n < 2)
            return 0.0;
        const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = k == 0 ? values[i] : values[i] * std::pow(x[i], k);
        if (std::isfinite(kink) && kink > x.front() && kink < x.back()) {
            const double pos = (kink - x.front()) / h;
            const double ip = std::round(pos);
            if (std::abs(pos - ip) < 1e-6) {
                const auto ik = static_cast<std::size_t>(ip);
                return detail::corrected_trapezoid(f, 0, ik, h)
                       + detail::corrected_trapezoid(f, ik, n - 1, h);
            }
        }
        return detail::corrected_trapezoid(f, 0, n - 1, h);
    }
};

/// Density scaled by P(Y(t) = tau); the atom is scaled alike.
struct PartialDensityGrid : DensityGrid {
    double probability = 0;
};

struct QuadratureConfig {
    double tolerance = 1e-9;  ///< absolute error budget for density values
    std::size_t max_nodes = std::size_t{1} << 22;
    double mollifier = 0;  ///< sd of a Gaussian smoothing kernel, 0 = none
    double support_sd = 12;
    unsigned workers = 0;
};

struct QuadratureReport {
    double radius = 0;  ///< truncation radius U
    double step = 0;    ///< frequency step h
    std::size_t nodes = 0;
    double period = 0;  ///< 2 pi / h
};

/// Interval outside which S(t) has negligible density: S = v U + sqrt(2 D U) Z
/// with occupation time U in [0, t].
inline std::pair<double, double>
position_support(double t, const KineticParams& p, double nsd)
{
    const double s = std::sqrt(2 * p.D() * t);
    return {std::min(0.0, p.v() * t) - nsd * s, std::max(0.0, p.v() * t) + nsd * s};
}

/// Default grid spanning mean +- nsd standard deviations for every phase
/// that contributes to `sel`, and the origin.
inline Grid auto_grid(double t,
                      const InitialDistribution& iota,
                      PhaseSelector sel,
                      const KineticParams& p,
                      std::size_t nodes = 4001,
                      double nsd = 8)
{
    double lo = 0, hi = 0;
    auto widen = [&](PhaseSelector s) {
        MomentSummary ms = moments_limit(t, iota, s, p);
        lo = std::min(lo, ms.mean - nsd * ms.sd());
        hi = std::max(hi, ms.mean + nsd * ms.sd());
    };
    if (sel == PhaseSelector::total) {
        widen(PhaseSelector::total);
        for (Phase tau : {Phase::free, Phase::adsorbed})
            if (state_prob_continuous(t, p, iota, tau) > 0)
                widen(select(tau));
    } else {
        widen(sel);
    }
    // put the origin on a node
    const double h = (hi - lo) / static_cast<double>(nodes - 1);
    lo = std::floor(lo / h) * h;
    return Grid(lo, lo + static_cast<double>(nodes - 1) * h, nodes);
}

namespace detail {

inline double gaussian_tail_integral(double a, double U)
{
    // int_U^inf exp(-a u^2) du
    return 0.5 * std::sqrt(std::numbers::pi / a) * std::erfc(U * std::sqrt(a));
}

// Smallest U >= lo with bound(U) <= tol for a decreasing bound.
template<class F>
double solve_radius(F bound, double lo, double tol)
{
    double hi = std::max(lo, 1.0);
    while (bound(hi) > tol) {
        hi *= 2;
        if (hi > 1e30)
            return hi;
    }
    if (bound(lo) <= tol)
        return lo;
    double a = lo;
    for (int i = 0; i < 200 && hi - a > 1e-9 * hi; ++i) {
        double mid = 0.5 * (a + hi);
        (bound(mid) > tol ? a : hi) = mid;
    }
    return hi;
}

// sum_k c_k Re(exp(-i u_k x) R_k) over a uniform x grid, in fixed chunks so
// that the floating-point order does not depend on the worker count.
inline std::vector<double> fourier_sum(const std::vector<cplx>& R,
                                       double h,
                                       const Grid& grid,
                                       unsigned workers)
{
    constexpr std::size_t chunk = 256;
    const std::size_t nchunks = (grid.n + chunk - 1) / chunk;
    const double dx = grid.step();
    std::vector<double> out(grid.n, 0.0);
    parallel_for(
        nchunks,
        [&](std::size_t c) {
            const std::size_t j0 = c * chunk;
            const std::size_t j1 = std::min(grid.n, j0 + chunk);
            std::vector<double> acc(j1 - j0, 0.0);
            const double x0 = grid[j0];
            for (std::size_t k = 0; k < R.size(); ++k) {
                const double u = h * static_cast<double>(k);
                const double wk = k == 0 ? 1.0 : 2.0;
                cplx z = std::polar(1.0, -u * x0);
                const cplx rot = std::polar(1.0, -u * dx);
                const cplx rk = wk * R[k];
                for (std::size_t j = j0; j < j1; ++j) {
                    acc[j - j0] += (z * rk).real();
                    z *= rot;
                }
            }
            for (std::size_t j = j0; j < j1; ++j)
                out[j] = acc[j - j0] * h / (2 * std::numbers::pi);
        },
        workers);
    return out;
}

}  // namespace detail

/// Density of S(t) (total) or of S(t) given Y(t) = tau on `grid`, by
/// trapezoidal quadrature of the inverse Fourier integral. The atom at 0 is
/// removed analytically and reported separately. Unless a mollifier is
/// requested, the slowly decaying rational part C / (D u^2 - i v u + M) is
/// subtracted and inverted in closed form, leaving an O(u^-4) remainder.
inline DensityGrid invert_cf(double t,
                             const Grid& grid,
                             const InitialDistribution& iota,
                             PhaseSelector sel,
                             const KineticParams& p,
                             const QuadratureConfig& quad = {},
                             QuadratureReport* report = nullptr)
{
    if (!(t > 0))
        throw DomainError("time must be positive");
    if (!(quad.tolerance > 0))
        throw ParameterError("quadrature tolerance must be positive");
    const double D = p.D(), v = p.v(), m = p.total_rate();
    const double sigma = quad.mollifier;
    const TailConstants K = tail_constants(t, iota, sel, p);
    const double atom = atom_mass(t, iota, sel, p);

    auto [slo, shi] = position_support(t, p, quad.support_sd);
    slo -= quad.support_sd * sigma;
    shi += quad.support_sd * sigma;
    const double width = shi - slo;

    // Rational part C / (w + M); M >= m is raised so that its inverse
    // transform decays within a fraction of the support width.
    const bool subtract = sigma == 0 && K.C > 0;
    const double kappa0 = 30 / width;
    const double M = std::max(m, kappa0 * std::abs(v) + kappa0 * kappa0 * D);
    const double root = std::sqrt(v * v / (D * D) + 4 * M / D);
    const double r1 = (v / D + root) / 2;  // x < 0 branch, r1 > 0
    const double r2 = (v / D - root) / 2;  // x > 0 branch, r2 < 0
    const double Acoef = K.C / std::sqrt(v * v + 4 * M * D);
    auto g_inv = [&](double x) {
        return Acoef * std::exp(x < 0 ? r1 * x : r2 * x);
    };

    double lo = slo, hi = shi;
    if (subtract) {
        const double small = quad.tolerance * 1e-3;
        if (Acoef > small) {
            lo = std::min(lo, std::log(small / Acoef) / r1);
            hi = std::max(hi, std::log(small / Acoef) / r2);
        }
    }
    const double period
        = 1.05 * std::max({hi - grid.lo, grid.hi - lo, grid.hi - grid.lo});
    const double h = 2 * std::numbers::pi / period;

    // Truncation radius from the certified large-|u| estimates.
    const double tol = quad.tolerance / 2;
    const double pi = std::numbers::pi;
    double U;
    if (subtract || sigma == 0) {
        const double C1 = K.C1 + K.C * (M - m);
        const double De2 = K.D_eff * K.D_eff;
        U = detail::solve_radius(
            [&](double u) {
                return (C1 / (3 * De2 * u * u * u)
                        + K.C2 * detail::gaussian_tail_integral(D * t, u))
                       / pi;
            },
            K.U0,
            tol);
    } else {
        const double a = sigma * sigma / 2;
        U = detail::solve_radius(
            [&](double u) {
                return (K.B1 / (u * u) + K.C2)
                       * detail::gaussian_tail_integral(a, u) / pi;
            },
            K.U0,
            tol);
    }
    const double nodes_d = std::ceil(U / h) + 1;
    if (nodes_d > static_cast<double>(quad.max_nodes)) {
        throw AccuracyError(
            "Fourier inversion needs truncation radius " + std::to_string(U)
                + " (" + std::to_string(nodes_d) + " nodes), beyond the budget of "
                + std::to_string(quad.max_nodes)
                + " nodes; loosen the tolerance or raise the node budget",
            U);
    }
    const auto nodes = static_cast<std::size_t>(nodes_d);

    std::vector<cplx> R(nodes);
    const double s2 = sigma * sigma / 2;
    constexpr std::size_t block = 4096;
    parallel_for(
        (nodes + block - 1) / block,
        [&](std::size_t b) {
            for (std::size_t k = b * block; k < std::min(nodes, (b + 1) * block);
                 ++k) {
                const double u = h * static_cast<double>(k);
                cplx psi = cf_continuous_part(t, u, iota, sel, p);
                if (subtract)
                    psi -= K.C / (cplx{D * u * u + M, -v * u});
                if (sigma > 0)
                    psi *= std::exp(-s2 * u * u);
                R[k] = psi;
            }
        },
        quad.workers);

    DensityGrid out;
    out.x = grid.nodes();
    out.values = detail::fourier_sum(R, h, grid, quad.workers);
    out.phase = sel;
    out.t = t;
    out.atom_weight = atom;
    if (subtract) {
        out.kink = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j)
            out.values[j] += g_inv(out.x[j]);
    }
    if (sigma > 0 && atom > 0) {
        // the smoothed atom is part of the continuous density
        const double norm = 1 / (sigma * std::sqrt(2 * pi));
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double z = out.x[j] / sigma;
            out.values[j] += atom * norm * std::exp(-z * z / 2);
        }
        out.atom_weight = 0;
    }
    if (out.min_value() < -1e-6) {
        throw AccuracyError("inverted density has ripple "
                                + std::to_string(out.min_value())
                                + " below -1e-6; tighten the tolerance",
                            U);
    }
    if (report)
        *report = {U, h, nodes, period};
    return out;
}

/// Density of S(t) restricted to Y(t) = tau: the conditional density times
/// P(Y(t) = tau).
inline PartialDensityGrid partial_density(double t,
                                          const Grid& grid,
                                          const InitialDistribution& iota,
                                          Phase tau,
                                          const KineticParams& p,
                                          const QuadratureConfig& quad = {})
{
    DensityGrid d = invert_cf(t, grid, iota, select(tau), p, quad);
    const double pt = state_prob_continuous(t, p, iota, tau);
    PartialDensityGrid out;
    static_cast<DensityGrid&>(out) = std::move(d);
    for (double& v : out.values)
        v *= pt;
    out.atom_weight *= pt;
    out.probability = pt;
    return out;
}

//---------------------------------------------------------------------------//
// n-step Gaussian mixtures
//---------------------------------------------------------------------------//

namespace detail {

// Phi(a) - Phi(b) for a >= b without cancellation in either tail.
inline double normal_interval(double a, double b)
{
    constexpr double r2 = std::numbers::sqrt2;
    if (b >= 0)
        return 0.5 * (std::erfc(b / r2) - std::erfc(a / r2));
    if (a <= 0)
        return 0.5 * (std::erfc(-a / r2) - std::erfc(-b / r2));
    return 1 - 0.5 * (std::erfc(a / r2) + std::erfc(-b / r2));
}

// Sum over components j = 1..n of w_j kernel(x; j), visiting for each
// component only the grid nodes within `reach` sds of its support.
template<class Kernel>
std::vector<double> mixture_on_grid(const std::vector<double>& weights,
                                    double mean_step,
                                    double var_step,
                                    double extra,
                                    const Grid& grid,
                                    Kernel kernel,
                                    unsigned workers)
{
    constexpr double reach = 40;
    constexpr std::size_t chunk = 512;
    const std::size_t nchunks = (grid.n + chunk - 1) / chunk;
    const double dx = grid.step();
    std::vector<double> out(grid.n, 0.0);
    parallel_for(
        nchunks,
        [&](std::size_t c) {
            const std::size_t i0 = c * chunk;
            const std::size_t i1 = std::min(grid.n, i0 + chunk);
            const double xa = grid[i0], xb = grid[i1 - 1];
            for (std::size_t j = 1; j < weights.size(); ++j) {
                const double w = weights[j];
                if (w == 0)
                    continue;
                const double jd = static_cast<double>(j);
                const double mj = jd * mean_step;
                const double sj = std::sqrt(jd * var_step);
                const double left = mj - reach * sj, right = mj + extra + reach * sj;
                if (right < xa || left > xb)
                    continue;
                std::size_t a = i0, b = i1;
                if (left > xa)
                    a = std::min(i1, i0 + static_cast<std::size_t>((left - xa) / dx));
                if (right < xb)
                    b = std::min(i1, i0 + static_cast<std::size_t>((right - xa) / dx) + 2);
                for (std::size_t i = a; i < b; ++i)
                    out[i] += w * kernel(grid[i], mj, sj);
            }
        },
        workers);
    return out;
}

}  // namespace detail

/// Exact density of S_n(t) given Y_n = F: a mixture over j >= 1 of
/// Normal(j v dt, 2 j D dt) with the conditional pmf as weights.
inline DensityGrid discrete_mixture_density(const DiscreteParams& dp,
                                            const Grid& grid,
                                            const InitialDistribution& iota,
                                            const KineticParams& p,
                                            unsigned workers = 0)
{
    const Pmf w = conditional_pmf(dp, iota, Phase::free);
    const double dt = dp.dt();
    const double inv_sqrt_2pi = 1 / std::sqrt(2 * std::numbers::pi);
    DensityGrid out;
    out.x = grid.nodes();
    out.values = detail::mixture_on_grid(
        w.values,
        p.v() * dt,
        2 * p.D() * dt,
        0.0,
        grid,
        [&](double x, double m, double s) {
            const double z = (x - m) / s;
            return inv_sqrt_2pi / s * std::exp(-0.5 * z * z);
        },
        workers);
    out.phase = PhaseSelector::free;
    out.t = dp.t();
    return out;
}

/// Density of S_n(t) + U_L given Y_n = F, with U_L uniform on [0, L]: each
/// Gaussian component becomes (Phi((x - m)/s) - Phi((x - L - m)/s)) / L.
inline DensityGrid injected_density(const DiscreteParams& dp,
                                    const Grid& grid,
                                    double L,
                                    const InitialDistribution& iota,
                                    const KineticParams& p,
                                    unsigned workers = 0)
{
    if (!(L > 0))
        throw ParameterError("injection length must be positive");
    const Pmf w = conditional_pmf(dp, iota, Phase::free);
    const double dt = dp.dt();
    DensityGrid out;
    out.x = grid.nodes();
    out.values = detail::mixture_on_grid(
        w.values,
        p.v() * dt,
        2 * p.D() * dt,
        L,
        grid,
        [&](double x, double m, double s) {
            return detail::normal_interval((x - m) / s, (x - L - m) / s) / L;
        },
        workers);
    out.phase = PhaseSelector::free;
    out.t = dp.t();
    return out;
}

inline void write_csv(std::ostream& os,
                      const DensityGrid& d,
                      const PartialDensityGrid* pf = nullptr,
                      const PartialDensityGrid* pa = nullptr)
{
    CsvWriter w(os);
    w.meta("phase", to_string(d.phase)).meta("t", d.t).meta("atom_weight", d.atom_weight);
    if (pa)
        w.meta("partial_atom_weight_A", pa->atom_weight);
    std::vector<std::string> cols{"x", "density"};
    if (pf)
        cols.push_back("partial_density_F");
    if (pa)
        cols.push_back("partial_density_A");
    w.header(cols);
    const auto dv = d.clamped();
    const auto fv = pf ? pf->clamped() : std::vector<double>{};
    const auto av = pa ? pa->clamped() : std::vector<double>{};
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        std::vector<std::string> row{format_real(d.x[i]), format_real(dv[i])};
        if (pf)
            row.push_back(format_real(fv[i]));
        if (pa)
            row.push_back(format_real(av[i]));
        w.row(row);
    }
}

}  // namespace kinetic
