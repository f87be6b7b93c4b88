// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Closed-form means and variances of S_n(t), S(t) and their terminal-phase
// versions.
#pragma once

#include <cmath>
#include <string>

#include "core.hpp"
#include "mbd.hpp"

namespace kinetic {

struct MomentSummary {
    double mean;
    double variance;
    PhaseSelector phase;
    double t;

    double sd() const { return std::sqrt(variance); }
};

namespace detail {

inline double checked_variance(double var, double scale)
{
    const double tol = 1e-12 * std::max(1.0, scale);
    if (var < -tol)
        throw NumericError("negative variance " + std::to_string(var));
    return var < 0 ? 0.0 : var;
}

}  // namespace detail

/// Mean and variance of S(t), S^F(t) or S^A(t).
inline MomentSummary moments_limit(double t,
                                   const InitialDistribution& iota,
                                   PhaseSelector sel,
                                   const KineticParams& p)
{
    if (!(t > 0))
        throw DomainError("time must be positive");
    const StationaryInfo st(p, iota);
    const double pF = st.pi_F(), pA = st.pi_A();
    const double eF = st.eps_F(), eA = st.eps_A();
    const double iF = iota.iota_F();
    const double A = st.A(t), s = p.total_rate();
    const double D = p.D(), v = p.v(), v2 = v * v;

    double mean = 0, var = 0;
    switch (sel) {
    case PhaseSelector::total: {
        mean = pF * v * t - eF * pF / s * v * (1 - A);
        var = 2 * D * pF * t - 2 * D * eF * pF / s * (1 - A)
              + 2 * (pA + eF * (pA - pF) * A) / s * pF * v2 * t
              + (eF * (pF - pA) - 2 * pA - eF * (pA - iF)) / (s * s) * pF * v2
              + A
                    * (2 * (pA + eF * (pA - iF)) / (s * s)
                       - A * pF * eF * eF / (s * s))
                    * pF * v2;
        break;
    }
    case PhaseSelector::free: {
        const double d = 1 - eF * A;
        const double m1 = (pF - eF * pA * A) / d;
        const double m2 = (pA - eF * pF) / (s * d);
        mean = m1 * v * t + m2 * (1 - A) * v;
        var = m1 * 2 * D * t + m2 * 2 * D * (1 - A)
              + (pF * pF - eF * pA * pA * A) / d * v2 * t * t
              - (m1 * t + m2 * (1 - A)) * (m1 * t + m2 * (1 - A)) * v2
              - 2 * (eF * pF * pF + pA * pA * A - 2 * pA * pF * (1 + eF * A))
                    / (s * d) * v2 * t
              + 2 * (1 - A)
                    * (eF * pF * pF + pA * pA - 2 * pA * pF * (1 + eF))
                    / (s * s * d) * v2;
        break;
    }
    case PhaseSelector::adsorbed: {
        const double d = 1 - eA * A;
        const double m1 = (pF - eA * pA * A) / d;
        const double m2 = (eA * pA - pF) / (s * d);
        mean = m1 * v * t + m2 * (1 - A) * v;
        var = m1 * 2 * D * t + m2 * 2 * D * (1 - A)
              + (pF * pF - eA * pA * pA * A) / d * v2 * t * t
              - (m1 * t + m2 * (1 - A)) * (m1 * t + m2 * (1 - A)) * v2
              - 2
                    * (pF * pF + eA * pA * pA * A
                       - pA * pF * (1 + eA) * (1 + A))
                    / (s * d) * v2 * t
              + 2 * (1 - A)
                    * (pF * pF + eA * pA * pA - 2 * pA * pF * (1 + eA))
                    / (s * s * d) * v2;
        break;
    }
    }
    var = detail::checked_variance(var, mean * mean + 2 * D * t);
    return {mean, var, sel, t};
}

/// Moments of S_n(t) computed from the pmf of K_n given the phase:
/// E = E[K] v dt and Var = E[K] 2 D dt + Var(K) (v dt)^2.
inline MomentSummary moments_discrete_pmf(const DiscreteParams& dp,
                                          const InitialDistribution& iota,
                                          PhaseSelector sel,
                                          const KineticParams& p)
{
    Pmf f = sel == PhaseSelector::total
                ? pmf(dp, iota)
                : conditional_pmf(dp,
                                  iota,
                                  sel == PhaseSelector::free ? Phase::free
                                                             : Phase::adsorbed);
    const PmfMoments k = pmf_moments(f);
    const double dt = dp.dt();
    return {k.mean * p.v() * dt,
            k.mean * 2 * p.D() * dt + k.variance * (p.v() * dt) * (p.v() * dt),
            sel,
            dp.t()};
}

/// Moments of S_n(t); closed forms for the total and free phases, pmf-based
/// for the adsorbed phase.
inline MomentSummary moments_discrete(const DiscreteParams& dp,
                                      const InitialDistribution& iota,
                                      PhaseSelector sel,
                                      const KineticParams& p)
{
    if (sel == PhaseSelector::adsorbed)
        return moments_discrete_pmf(dp, iota, sel, p);

    const StationaryInfo st(dp.a(), dp.b(), iota);
    const double pF = st.pi_F(), pA = st.pi_A(), eF = st.eps_F();
    const double iF = iota.iota_F();
    const double g = dp.gamma(), n = static_cast<double>(dp.n());
    const double gn = std::pow(g, n), gn1 = std::pow(g, n - 1);
    const double t = dp.t(), dt = dp.dt();
    const double D = p.D(), v = p.v(), v2 = v * v, vdt2 = (v * dt) * (v * dt);
    const double og = 1 - g;

    double mean = 0, var = 0;
    if (sel == PhaseSelector::total) {
        mean = pF * v * t - eF * pF * (1 - gn) / og * v * dt;
        var = 2 * D * pF * t - 2 * D * eF * pF * (1 - gn) / og * dt
              + (pA * (1 + g) + 2 * eF * (pA - pF) * gn) / og * pF * v2 * t * dt
              + (g * (eF * (pF - pA) - 2 * pA) - eF * (pA - iF)) / (og * og) * pF
                    * vdt2
              + gn
                    * (eF * (pF - pA) / og
                       + 2 * (g * pA + eF * (pA - iF)) / (og * og)
                       - gn * pF * eF * eF / (og * og))
                    * pF * vdt2;
    } else {
        const double d = 1 - eF * gn1;
        const double m1 = (pF - eF * pA * gn1) / d;
        const double m2 = (pA - eF * pF) * (1 - gn) / (og * d);
        mean = m1 * v * t + m2 * v * dt;
        var = m1 * 2 * D * t + m2 * 2 * D * dt
              + (pF * pF - eF * pA * pA * gn1) / d * v2 * t * t
              - (m1 * t + m2 * dt) * (m1 * t + m2 * dt) * v2
              - (pA * pF * (1 + 3 * eF * gn1) / d
                 + 2 * (eF * pF * pF + pA * pA * gn - 2 * pA * pF * (1 + eF * gn1))
                       / (og * d))
                    * v2 * t * dt
              + (1 - gn)
                    * ((pA * pF * (4 + eF) - (pA + eF * pF * pF)) / (og * d)
                       + 2 * (eF * pF * pF + pA * pA - 2 * pA * pF * (1 + eF))
                             / (og * og * d))
                    * vdt2;
    }
    var = detail::checked_variance(var, mean * mean + 2 * D * t);
    return {mean, var, sel, t};
}

/// Normalized second central moment of the mobile phase for a particle
/// started mobile, in the (beta, k) convention with lambda = beta k, mu = k.
inline double michalak_mu2star(double t, double beta, double k, double D, double v)
{
    if (!(beta > 0) || !(k > 0))
        throw ParameterError("beta and k must be positive");
    const double A = std::exp(-(beta + 1) * k * t);
    const double b1 = beta + 1, bA = 1 + beta * A, v2 = v * v;
    return t * t * A * v2 * beta * (beta - 1) * (beta - 1) / (b1 * b1 * bA * bA)
           + t * (2 * D / b1 + 2 * v2 * beta / (k * b1 * b1 * b1))
           + t * A
                 * (4 * v2 * beta * (-beta * beta * A - beta * beta - beta + 1)
                        / (k * bA * bA * b1 * b1 * b1)
                    + 2 * D * beta * (beta - 1) / (b1 * bA))
           + 2 * v2 * beta * (1 - A) * (3 * beta * beta * A - 3 - beta * (A - 1))
                 / (k * k * bA * bA * b1 * b1 * b1 * b1)
           + 4 * D * beta * (1 - A) / (k * bA * b1 * b1);
}

/// Variance of S(t) for a particle started from the stationary law.
inline double stationary_variance(double t, const KineticParams& p)
{
    if (!(t >= 0))
        throw DomainError("time must be nonnegative");
    const double lam = p.lambda(), mu = p.mu(), s = lam + mu;
    const double D = p.D(), v2 = p.v() * p.v();
    const double A = std::exp(-s * t);
    return 2 * D * mu * t / s + 2 * mu * lam * v2 * t / (s * s * s)
           - 2 * mu * lam * v2 * (1 - A) / (s * s * s * s);
}

struct NonlinearityReport {
    double var_free_start;      ///< Var S^F(t), iota = (1, 0)
    double var_adsorbed_start;  ///< Var S^F(t), iota = (0, 1)
    double var_mixed_start;     ///< Var S^F(t), iota = (1/2, 1/2)
    double mismatch;            ///< |mixed - (free + adsorbed) / 2|
    double mean_mismatch;       ///< same construction on E S(t)
};

/// Compares the mobile-phase variance for a mixed start against the average
/// of the two pure starts.
inline NonlinearityReport nonlinearity_witness(double t, const KineticParams& p)
{
    const InitialDistribution f(1.0, 0.0), a(0.0, 1.0), h(0.5, 0.5);
    const double vf = moments_limit(t, f, PhaseSelector::free, p).variance;
    const double va = moments_limit(t, a, PhaseSelector::free, p).variance;
    const double vh = moments_limit(t, h, PhaseSelector::free, p).variance;
    const double mf = moments_limit(t, f, PhaseSelector::total, p).mean;
    const double ma = moments_limit(t, a, PhaseSelector::total, p).mean;
    const double mh = moments_limit(t, h, PhaseSelector::total, p).mean;
    return {vf, va, vh, std::abs(vh - (vf + va) / 2), std::abs(mh - (mf + ma) / 2)};
}

}  // namespace kinetic
