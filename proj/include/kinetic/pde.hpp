// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Finite-difference solver for the mobile/immobile transport system
//   dC_F/dt = D C_F'' - v C_F' - lambda C_F + mu C_A
//   dC_A/dt =                    lambda C_F - mu C_A
// and a discrete residual of the same system.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"
#include "csv.hpp"
#include "density.hpp"

namespace kinetic {

/// Space-time samples of the two concentration fields. `C_F[k][i]` is the
/// mobile field at time `times[k]` and node `x[i]`.
struct FieldPair {
    std::vector<double> x;
    std::vector<double> times;
    std::vector<std::vector<double>> C_F;
    std::vector<std::vector<double>> C_A;
    std::vector<std::string> warnings;

    double total_mass(std::size_t k) const
    {
        double s = 0;
        const double h = x.size() > 1 ? x[1] - x[0] : 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += C_F[k][i] + C_A[k][i];
        return s * h;
    }
};

struct PdeOptions {
    /// Time levels to store besides t = 0; empty means t_end only. Each is
    /// rounded to the nearest step.
    std::vector<double> snapshots;
    /// Permit cell Peclet numbers above 2 (recorded as a warning).
    bool allow_high_peclet = false;
    double boundary_tolerance = 1e-10;
};

/// Default width of the Gaussian that stands in for the initial delta.
inline double default_init_width(const Grid& grid, const KineticParams& p, double t_end)
{
    return std::max(2 * grid.step(), 0.005 * std::sqrt(2 * p.D() * t_end));
}

namespace detail {

// Solves a tridiagonal system with constant bands in place (Thomas).
inline void thomas_constant(double sub,
                            double diag,
                            double sup,
                            std::vector<double>& rhs,
                            std::vector<double>& work)
{
    const std::size_t n = rhs.size();
    work.resize(n);
    double beta = diag;
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        work[i] = sup / beta;
        beta = diag - sub * work[i];
        rhs[i] = (rhs[i] - sub * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] -= work[i + 1] * rhs[i + 1];
}

}  // namespace detail

/// Strang splitting: exact exchange over dt/2, Crank-Nicolson transport of
/// C_F over dt with zero Dirichlet boundaries, exact exchange over dt/2.
/// The initial delta is a Gaussian of sd `init_width` (<= 0 selects
/// default_init_width).
inline FieldPair solve(const KineticParams& p,
                       const InitialDistribution& iota,
                       double init_width,
                       const Grid& grid,
                       double t_end,
                       double dt_pde,
                       const PdeOptions& opts = {})
{
    if (!(t_end > 0) || !(dt_pde > 0))
        throw ParameterError("end time and time step must be positive");
    const double h = grid.step();
    const double D = p.D(), v = p.v(), lam = p.lambda(), mu = p.mu();
    if (init_width <= 0)
        init_width = default_init_width(grid, p, t_end);

    FieldPair out;
    const double peclet = std::abs(v) * h / D;
    if (peclet > 2) {
        std::string msg = "cell Peclet number " + std::to_string(peclet)
                          + " exceeds 2; central advection may oscillate";
        if (!opts.allow_high_peclet)
            throw AccuracyError(msg, 2 * D / std::abs(v));
        out.warnings.push_back(msg);
    }

    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt_pde));
    if (steps == 0)
        throw ParameterError("time step exceeds the end time");
    const double dt = t_end / static_cast<double>(steps);

    std::vector<std::size_t> store;
    if (opts.snapshots.empty()) {
        store.push_back(steps);
    } else {
        for (double ts : opts.snapshots) {
            if (!(ts >= 0) || ts > t_end * (1 + 1e-12))
                throw ParameterError("snapshot time outside [0, t_end]");
            store.push_back(static_cast<std::size_t>(std::llround(ts / dt)));
        }
        std::sort(store.begin(), store.end());
        store.erase(std::unique(store.begin(), store.end()), store.end());
    }

    const std::size_t n = grid.n;
    out.x = grid.nodes();
    std::vector<double> F(n), A(n);
    const double norm = 1 / (init_width * std::sqrt(2 * std::numbers::pi));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = out.x[i] / init_width;
        const double g = norm * std::exp(-0.5 * z * z);
        F[i] = iota.iota_F() * g;
        A[i] = iota.iota_A() * g;
    }

    auto record = [&](std::size_t k) {
        out.times.push_back(static_cast<double>(k) * dt);
        out.C_F.push_back(F);
        out.C_A.push_back(A);
    };
    std::size_t next_store = 0;
    if (store[0] == 0) {
        record(0);
        ++next_store;
    }

    const double rate = lam + mu;
    const double decay = std::exp(-rate * dt / 2);
    auto exchange = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            const double T = F[i] + A[i];
            const double Aeq = lam * T / rate;
            A[i] = Aeq + (A[i] - Aeq) * decay;
            F[i] = T - A[i];
        }
    };
    // L F_i = D (F_{i+1} - 2F_i + F_{i-1}) / h^2 - v (F_{i+1} - F_{i-1}) / 2h
    const double cl = D / (h * h) + v / (2 * h);  // coefficient of F_{i-1}
    const double cc = -2 * D / (h * h);
    const double cr = D / (h * h) - v / (2 * h);  // coefficient of F_{i+1}
    const double k2 = dt / 2;
    std::vector<double> rhs(n - 2), work;

    for (std::size_t k = 1; k <= steps; ++k) {
        exchange();
        for (std::size_t i = 1; i + 1 < n; ++i) {
            rhs[i - 1] = F[i]
                         + k2 * (cl * F[i - 1] + cc * F[i] + cr * F[i + 1]);
        }
        detail::thomas_constant(-k2 * cl, 1 - k2 * cc, -k2 * cr, rhs, work);
        F[0] = 0;
        F[n - 1] = 0;
        for (std::size_t i = 1; i + 1 < n; ++i)
            F[i] = rhs[i - 1];
        exchange();

        const double edge = std::max({std::abs(F[1]), std::abs(F[n - 2]),
                                      std::abs(A[0]), std::abs(A[n - 1])});
        if (edge > opts.boundary_tolerance) {
            char msg[128];
            std::snprintf(msg, sizeof msg,
                          "solution reaches the grid boundary (%.3g at t=%.4g); widen the grid",
                          edge, static_cast<double>(k) * dt);
            throw AccuracyError(msg, grid.hi - grid.lo);
        }
        if (!std::isfinite(F[n / 2]))
            throw NumericError("non-finite field value");
        if (next_store < store.size() && store[next_store] == k) {
            record(k);
            ++next_store;
        }
    }
    return out;
}

struct ResidualNorms {
    double r1;  ///< discrete L2 norm, mobile equation
    double r2;  ///< discrete L2 norm, immobile equation
    double r1_normalized;  ///< r1 / largest term norm of the mobile equation
    double r2_normalized;
};

/// Central-difference residual of both equations at the interior time levels
/// of a uniformly spaced space-time sample.
inline ResidualNorms residual(const FieldPair& f, const KineticParams& p)
{
    const std::size_t nt = f.times.size(), nx = f.x.size();
    if (nt < 3 || nx < 5)
        throw ParameterError("residual needs at least 3 time levels and 5 nodes");
    const double h = f.x[1] - f.x[0];
    const double dt = f.times[1] - f.times[0];
    for (std::size_t k = 2; k < nt; ++k) {
        if (std::abs((f.times[k] - f.times[k - 1]) - dt) > 1e-9 * dt)
            throw ParameterError("residual needs uniformly spaced time levels");
    }
    if (f.times.front() < 0.1 / p.total_rate())
        throw DomainError("residual is evaluated away from t = 0; first level "
                          "must be at least 0.1 / (lambda + mu)");
    // resolution: the narrowest profile must span at least 5 nodes
    for (std::size_t k = 0; k < nt; ++k) {
        double m0 = 0, m1 = 0, m2 = 0;
        for (std::size_t i = 0; i < nx; ++i) {
            const double c = f.C_F[k][i] + f.C_A[k][i];
            m0 += c;
            m1 += c * f.x[i];
            m2 += c * f.x[i] * f.x[i];
        }
        const double mean = m1 / m0;
        const double sd = std::sqrt(std::max(0.0, m2 / m0 - mean * mean));
        if (sd < 5 * h)
            throw AccuracyError("grid too coarse for the residual: profile sd "
                                    + std::to_string(sd) + " spans fewer than 5 nodes",
                                sd / 5);
    }

    const double D = p.D(), v = p.v(), lam = p.lambda(), mu = p.mu();
    double r1 = 0, r2 = 0;
    double t1[5] = {0, 0, 0, 0, 0}, t2[3] = {0, 0, 0};
    for (std::size_t k = 1; k + 1 < nt; ++k) {
        const auto &Fm = f.C_F[k - 1], &F = f.C_F[k], &Fp = f.C_F[k + 1];
        const auto &Am = f.C_A[k - 1], &A = f.C_A[k], &Ap = f.C_A[k + 1];
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const double Ft = (Fp[i] - Fm[i]) / (2 * dt);
            const double At = (Ap[i] - Am[i]) / (2 * dt);
            const double Fxx = (F[i + 1] - 2 * F[i] + F[i - 1]) / (h * h);
            const double Fx = (F[i + 1] - F[i - 1]) / (2 * h);
            const double e1 = Ft - D * Fxx + v * Fx + lam * F[i] - mu * A[i];
            const double e2 = At - lam * F[i] + mu * A[i];
            r1 += e1 * e1;
            r2 += e2 * e2;
            const double a1[5] = {Ft, D * Fxx, v * Fx, lam * F[i], mu * A[i]};
            for (int q = 0; q < 5; ++q)
                t1[q] += a1[q] * a1[q];
            const double a2[3] = {At, lam * F[i], mu * A[i]};
            for (int q = 0; q < 3; ++q)
                t2[q] += a2[q] * a2[q];
        }
    }
    const double w = h * dt;
    ResidualNorms out;
    out.r1 = std::sqrt(r1 * w);
    out.r2 = std::sqrt(r2 * w);
    const double s1 = std::sqrt(*std::max_element(t1, t1 + 5) * w);
    const double s2 = std::sqrt(*std::max_element(t2, t2 + 3) * w);
    out.r1_normalized = s1 > 0 ? out.r1 / s1 : 0.0;
    out.r2_normalized = s2 > 0 ? out.r2 / s2 : 0.0;
    return out;
}

/// Space-time sample of the partial densities, the stochastic counterpart of
/// (C_F, C_A), from Fourier inversion.
inline FieldPair density_fields(const KineticParams& p,
                                const InitialDistribution& iota,
                                const Grid& grid,
                                const std::vector<double>& times,
                                const QuadratureConfig& quad = {})
{
    FieldPair f;
    f.x = grid.nodes();
    for (double t : times) {
        auto pf = partial_density(t, grid, iota, Phase::free, p, quad);
        auto pa = partial_density(t, grid, iota, Phase::adsorbed, p, quad);
        if (pa.atom_weight > 0 || pf.atom_weight > 0)
            f.warnings.push_back("atom at x = 0 omitted from the field sample");
        f.times.push_back(t);
        f.C_F.push_back(std::move(pf.values));
        f.C_A.push_back(std::move(pa.values));
    }
    return f;
}

/// Discrete L1 distance of two sampled profiles on the same uniform grid.
inline double l1_distance(const std::vector<double>& a,
                          const std::vector<double>& b,
                          double h)
{
    if (a.size() != b.size())
        throw ParameterError("profiles differ in length");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::abs(a[i] - b[i]);
    return s * h;
}

inline void write_csv(std::ostream& os, const FieldPair& f)
{
    CsvWriter w(os);
    w.header({"t", "x", "C_F", "C_A"});
    for (std::size_t k = 0; k < f.times.size(); ++k)
        for (std::size_t i = 0; i < f.x.size(); ++i)
            w.row({f.times[k], f.x[i], f.C_F[k][i], f.C_A[k][i]});
}

}  // namespace kinetic
