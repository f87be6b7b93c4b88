// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Characteristic functions of the continuous-time position S(t) and of its
// terminal-phase versions, their discrete-step counterparts, the atom of the
// adsorbed phase and Laplace-resolvent cross-checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core.hpp"
#include "mbd.hpp"

namespace kinetic {

struct ThetaPair {
    cplx theta_A;
    cplx theta_F;
    cplx r;      ///< (theta_A + theta_F) / 2, Re r >= 0
    cplx w;      ///< D u^2 - i v u
    cplx delta;  ///< theta_A - (lambda - mu), formed without cancellation
};

inline ThetaPair theta(double u, const KineticParams& p)
{
    const double lam = p.lambda(), mu = p.mu();
    const cplx w{p.D() * u * u, -p.v() * u};
    const cplx wp = w + (lam - mu);
    cplx r = std::sqrt(wp * wp + 4 * lam * mu);
    if (r.real() < 0)
        r = -r;
    // r - wp is small when |wp| is large; use the conjugate form there.
    const cplx delta = wp.real() >= 0 ? 4 * lam * mu / (r + wp) : r - wp;
    return {delta + (lam - mu), r + w, r, w, delta};
}

namespace detail {

struct CfParts {
    cplx E1;  ///< exp((delta - 2 mu) t / 2)
    cplx E2;  ///< exp(-(theta_F + lambda + mu) t / 2)
    ThetaPair th;
};

inline CfParts cf_parts(double t, double u, const KineticParams& p)
{
    ThetaPair th = theta(u, p);
    const double m = p.total_rate();
    return {std::exp((th.delta - 2 * p.mu()) * (t / 2)),
            std::exp(-(th.theta_F + m) * (t / 2)),
            th};
}

inline double phase_prob(double t,
                         const KineticParams& p,
                         const InitialDistribution& iota,
                         Phase tau)
{
    double pt = state_prob_continuous(t, p, iota, tau);
    if (!(pt > 0))
        throw DomainError(std::string("cannot condition on phase '")
                          + to_string(tau) + "' with probability zero");
    return pt;
}

inline void check_time(double t)
{
    if (!(t > 0) || !std::isfinite(t))
        throw DomainError("time must be positive");
}

}  // namespace detail

/// E[exp(iuS(t)); Y(t) = tau].
inline cplx partial_cf(double t,
                       double u,
                       const InitialDistribution& iota,
                       Phase tau,
                       const KineticParams& p)
{
    detail::check_time(t);
    const auto [E1, E2, th] = detail::cf_parts(t, u, p);
    const double lam = p.lambda(), mu = p.mu(), m = lam + mu;
    const double iF = iota.iota_F(), iA = iota.iota_A();
    if (tau == Phase::free) {
        return (E1 * (iF * th.delta + 2 * mu * iA)
                + E2 * (iF * (th.theta_F + m) - 2 * mu))
               / (2.0 * th.r);
    }
    return (E1 * (iA * (th.theta_F - m) + 2 * lam)
            + E2 * (iA * (th.theta_A + m) - 2 * lam))
           / (2.0 * th.r);
}

/// Characteristic function of S(t) or of S(t) given Y(t) = tau.
inline cplx cf(double t,
               double u,
               const InitialDistribution& iota,
               PhaseSelector sel,
               const KineticParams& p)
{
    detail::check_time(t);
    if (sel != PhaseSelector::total) {
        Phase tau = sel == PhaseSelector::free ? Phase::free : Phase::adsorbed;
        return partial_cf(t, u, iota, tau, p)
               / detail::phase_prob(t, p, iota, tau);
    }
    const auto [E1, E2, th] = detail::cf_parts(t, u, p);
    const double m = p.total_rate();
    const double iF = iota.iota_F(), iA = iota.iota_A();
    return (E1 * (iA * th.theta_F + iF * th.theta_A + m)
            + E2 * (iA * th.theta_A + iF * th.theta_F - m))
           / (2.0 * th.r);
}

/// Probability that the particle never left the adsorbed phase, as a mass
/// at x = 0: unconditional for `total`, conditional on Y(t) otherwise.
inline double atom_mass(double t,
                        const InitialDistribution& iota,
                        PhaseSelector sel,
                        const KineticParams& p)
{
    detail::check_time(t);
    const double stay = iota.iota_A() * std::exp(-p.mu() * t);
    switch (sel) {
    case PhaseSelector::total:
        return stay;
    case PhaseSelector::free:
        return 0.0;
    case PhaseSelector::adsorbed:
        return stay == 0.0
                   ? 0.0
                   : stay / detail::phase_prob(t, p, iota, Phase::adsorbed);
    }
    return 0.0;
}

/// Weight of the atom at 0 in the law of S(t) given Y(t) = A.
inline double
atom_weight(double t, const InitialDistribution& iota, const KineticParams& p)
{
    return atom_mass(t, iota, PhaseSelector::adsorbed, p);
}

/// E[exp(iuS(t)); Y(t) = tau, S(t) != 0]: the partial CF with the atom
/// removed. Only the adsorbed phase carries an atom.
inline cplx partial_cf_continuous(double t,
                                  double u,
                                  const InitialDistribution& iota,
                                  Phase tau,
                                  const KineticParams& p)
{
    if (tau == Phase::free)
        return partial_cf(t, u, iota, tau, p);
    detail::check_time(t);
    const auto [E1, E2, th] = detail::cf_parts(t, u, p);
    (void)E1;
    const double lam = p.lambda(), mu = p.mu(), m = lam + mu;
    const double iF = iota.iota_F(), iA = iota.iota_A();
    const cplx half = th.delta * (t / 2);
    // E1 = exp(-mu t) exp(delta t / 2); the iota_A exp(-mu t) atom is peeled
    // off exactly via expm1.
    const cplx cont
        = std::exp(-mu * t)
          * (iA * detail::expm1(half)
             + std::exp(half) * (2 * lam * iF - iA * th.delta) / (2.0 * th.r));
    return cont + E2 * (iA * (th.theta_A + m) - 2 * lam) / (2.0 * th.r);
}

/// Continuous part of the CF: total, or conditional on the terminal phase.
inline cplx cf_continuous_part(double t,
                               double u,
                               const InitialDistribution& iota,
                               PhaseSelector sel,
                               const KineticParams& p)
{
    switch (sel) {
    case PhaseSelector::total:
        return partial_cf_continuous(t, u, iota, Phase::free, p)
               + partial_cf_continuous(t, u, iota, Phase::adsorbed, p);
    case PhaseSelector::free:
        return partial_cf_continuous(t, u, iota, Phase::free, p)
               / detail::phase_prob(t, p, iota, Phase::free);
    case PhaseSelector::adsorbed:
        return partial_cf_continuous(t, u, iota, Phase::adsorbed, p)
               / detail::phase_prob(t, p, iota, Phase::adsorbed);
    }
    return {};
}

/// CF of the n-step position S_n(t): the pgf of the chosen phase evaluated
/// at the CF of one free step, exp(i v dt u - D dt u^2).
inline cplx cf_discrete(const DiscreteParams& dp,
                        double u,
                        const InitialDistribution& iota,
                        PhaseSelector sel,
                        const KineticParams& p)
{
    const double dt = dp.dt();
    const cplx step = std::exp(cplx{-p.D() * dt * u * u, p.v() * dt * u});
    return pgf(dp, iota, sel, step);
}

//---------------------------------------------------------------------------//
// Tail bounds
//---------------------------------------------------------------------------//

/// Constants of the large-|u| estimates for one phase and initial
/// distribution. For |u| >= U0, with q(u) = D u^2 + lambda - mu >= D_eff u^2:
///   |psi(u) - C / (w + lambda + mu)| <= C1 / q^2 + C2 exp(-D t u^2)
///   |psi(u)|                         <= B1 / u^2 + C2 exp(-D t u^2)
/// where psi is the atom-free partial CF.
struct TailConstants {
    double U0;
    double D_eff;
    double C;   ///< coefficient of the leading rational term
    double C1;
    double C2;
    double B1;
};

namespace detail {

struct TailBase {
    double U0, q0, D_eff, s0, dmax;
};

inline TailBase tail_base(const KineticParams& p)
{
    const double lam = p.lambda(), mu = p.mu(), D = p.D();
    const double q0 = std::max(4 * std::sqrt(lam * mu), lam + mu);
    const double U0 = std::sqrt((q0 + mu - lam) / D);
    const double D_eff = std::min(D, q0 / (U0 * U0));
    const double s0 = std::sqrt(1 - 4 * lam * mu / (q0 * q0));
    return {U0, q0, D_eff, s0, 4 * lam * mu / q0};
}

}  // namespace detail

inline TailConstants partial_tail_constants(double t,
                                            const InitialDistribution& iota,
                                            Phase tau,
                                            const KineticParams& p)
{
    detail::check_time(t);
    const auto [U0, q0, D_eff, s0, dm] = detail::tail_base(p);
    const double lam = p.lambda(), mu = p.mu();
    const double iF = iota.iota_F(), iA = iota.iota_A();
    const double emu = std::exp(-mu * t);
    const double eh = std::exp(dm * t / 2);
    const double e2 = std::exp(-(lam - dm / 2) * t);
    TailConstants k{U0, D_eff, 0, 0, 0, 0};
    if (tau == Phase::free) {
        k.C = mu * iA * emu;
        k.C1 = (emu * eh * iF * 2 * lam * mu
                + mu * iA * emu * eh * 2 * lam * mu * t
                + mu * iA * emu * (2 * mu + dm))
               / s0;
        const double cF = 1 + 1 / s0 + 2 * std::max(lam, mu) / (q0 * s0);
        k.C2 = e2 * (iF * cF + 2 * mu / (q0 * s0)) / 2;
    } else {
        k.C = emu * (iA * lam * mu * t + lam * iF);
        k.C1 = emu
               * (iA
                      * (2 * lam * lam * mu * mu * t * t * eh
                         + lam * mu * t * (4 * mu + dm)
                         + eh * 2 * lam * mu / s0)
                  + lam * iF * (2 * lam * mu * t * eh + 2 * mu + dm) / s0);
        k.C2 = e2 * (iA * (dm + 2 * lam) + 2 * lam) / (2 * q0 * s0);
    }
    // |C / (w + m)| <= C / q and C1 / q^2 <= C1 / (q0 q), q >= D_eff u^2
    k.B1 = (k.C + k.C1 / q0) / D_eff;
    return k;
}

/// Constants for the atom-free CF selected by `sel` (sum of the two partial
/// constants for `total`, divided by P(Y(t) = tau) for conditional phases).
inline TailConstants tail_constants(double t,
                                    const InitialDistribution& iota,
                                    PhaseSelector sel,
                                    const KineticParams& p)
{
    if (sel == PhaseSelector::total) {
        TailConstants f = partial_tail_constants(t, iota, Phase::free, p);
        TailConstants a = partial_tail_constants(t, iota, Phase::adsorbed, p);
        f.C += a.C;
        f.C1 += a.C1;
        f.C2 += a.C2;
        f.B1 += a.B1;
        return f;
    }
    Phase tau = sel == PhaseSelector::free ? Phase::free : Phase::adsorbed;
    TailConstants k = partial_tail_constants(t, iota, tau, p);
    const double pt = detail::phase_prob(t, p, iota, tau);
    k.C /= pt;
    k.C1 /= pt;
    k.C2 /= pt;
    k.B1 /= pt;
    return k;
}

/// Upper bound, valid for every initial distribution, on |phi^F_t(u)| and
/// |phi^A_t(u) - kappa| for |u| beyond the crossover returned by
/// tail_crossover(). Decreasing in |u|.
inline double cf_tail_bound(double t, double u, const KineticParams& p)
{
    detail::check_time(t);
    const double U0 = detail::tail_base(p).U0;
    const double au = std::abs(u);
    if (au < U0)
        throw DomainError("tail bound is only certified for |u| >= "
                          + std::to_string(U0));
    const StationaryInfo st(p, InitialDistribution::free());
    const double A = st.A(t);
    // the constants are affine in iota with nonnegative coefficients, so the
    // supremum over iota sits at a vertex
    double B1 = 0, C2 = 0;
    for (Phase tau : {Phase::free, Phase::adsorbed}) {
        // P(Y(t) = tau) is smallest when starting in the other phase
        const double pmin = st.pi(tau) * (1 - A);
        for (const auto& iota :
             {InitialDistribution::free(), InitialDistribution::adsorbed()}) {
            auto k = partial_tail_constants(t, iota, tau, p);
            B1 = std::max(B1, k.B1 / pmin);
            C2 = std::max(C2, k.C2 / pmin);
        }
    }
    return B1 / (au * au) + C2 * std::exp(-p.D() * t * au * au / 2);
}

inline double tail_crossover(const KineticParams& p)
{
    return detail::tail_base(p).U0;
}

//---------------------------------------------------------------------------//
// Laplace resolvent
//---------------------------------------------------------------------------//

struct ResolventPair {
    cplx numeric;
    cplx closed;
    double error_estimate;
};

/// int_0^inf exp(-phi t) E[exp(iuS(t)); Y(t) in phase] dt by adaptive
/// quadrature, next to the rational form obtained from the generator.
inline ResolventPair resolvent_pair(double phi,
                                    double u,
                                    const InitialDistribution& iota,
                                    const KineticParams& p,
                                    PhaseSelector sel)
{
    if (!(phi > 0))
        throw DomainError("resolvent parameter phi must be positive");
    const double lam = p.lambda(), mu = p.mu();
    const cplx w{p.D() * u * u, -p.v() * u};
    const cplx det = (phi + lam + w) * (phi + mu) - lam * mu;
    cplx closed;
    switch (sel) {
    case PhaseSelector::total:
        closed = (phi + lam + mu + iota.iota_A() * w) / det;
        break;
    case PhaseSelector::free:
        closed = (mu + iota.iota_F() * phi) / det;
        break;
    case PhaseSelector::adsorbed:
        closed = (lam + iota.iota_A() * (phi + w)) / det;
        break;
    }

    auto weighted = [&](double t) -> cplx {
        if (t <= 0) {
            if (sel == PhaseSelector::total)
                return 1.0;
            return sel == PhaseSelector::free ? iota.iota_F() : iota.iota_A();
        }
        cplx val = sel == PhaseSelector::total
                       ? cf(t, u, iota, sel, p)
                       : partial_cf(t,
                                    u,
                                    iota,
                                    sel == PhaseSelector::free
                                        ? Phase::free
                                        : Phase::adsorbed,
                                    p);
        return std::exp(-phi * t) * val;
    };
    // |E[.]| <= 1, so the neglected tail is at most exp(-phi T) / phi
    const double tail_tol = 1e-12;
    const double T_max
        = std::max(std::log(1 / tail_tol), std::log(1 / (tail_tol * phi))) / phi;
    double err = 0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    // split at a few decay lengths so the adaptive rule sees the bulk
    const double edges[] = {0.0, T_max / 64, T_max / 8, T_max};
    cplx numeric = 0;
    for (int i = 0; i < 3; ++i) {
        double e = 0;
        numeric += GK::integrate(weighted, edges[i], edges[i + 1], 20, 1e-13, &e);
        err += e;
    }
    const double scale = std::max(1.0, std::abs(numeric));
    if (!std::isfinite(err) || err > 1e-8 * scale)
        throw NumericError("resolvent quadrature did not converge: error "
                           "estimate "
                           + std::to_string(err) + " at phi="
                           + std::to_string(phi) + ", u=" + std::to_string(u));
    return {numeric, closed, err + tail_tol};
}

}  // namespace kinetic
