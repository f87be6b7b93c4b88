// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Markov binomial distribution: the number of free steps K_n of a two-state
// chain over n steps, its phase-partitioned versions and generating
// functions.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"
#include "csv.hpp"

namespace kinetic {

using cplx = std::complex<double>;

struct Pmf {
    std::size_t n = 0;
    std::vector<double> values;  ///< indexed j = 0..n

    double operator[](std::ptrdiff_t j) const
    {
        if (j < 0 || static_cast<std::size_t>(j) > n)
            return 0.0;
        return values[static_cast<std::size_t>(j)];
    }
    double sum() const
    {
        double s = 0;
        for (double v : values)
            s += v;
        return s;
    }
};

/// f-hat_n^tau(j) = P(K_n = j, Y_n = tau)
struct PartialPmf : Pmf {
    Phase tau = Phase::free;
};

namespace detail {

// Seeds f_1, f_2 of the three-term recursion for the total pmf and the two
// terminal-phase partial pmfs.
struct Seeds {
    double f1[2];
    double f2[3];
};

inline Seeds
seeds(const DiscreteParams& dp, const InitialDistribution& iota, PhaseSelector sel)
{
    const double a = dp.a(), b = dp.b();
    const double iF = iota.iota_F(), iA = iota.iota_A();
    switch (sel) {
    case PhaseSelector::total:
        return {{iA, iF}, {iA * (1 - b), iA * b + iF * a, iF * (1 - a)}};
    case PhaseSelector::free:
        return {{0.0, iF}, {0.0, iA * b, iF * (1 - a)}};
    case PhaseSelector::adsorbed:
        return {{iA, 0.0}, {iA * (1 - b), iF * a, 0.0}};
    }
    return {};
}

inline std::vector<double> recurse(const DiscreteParams& dp,
                                   const InitialDistribution& iota,
                                   PhaseSelector sel)
{
    const std::size_t n = dp.n();
    const Seeds s = seeds(dp, iota, sel);
    if (n == 1)
        return {s.f1[0], s.f1[1]};

    const double a = dp.a(), b = dp.b(), g = dp.gamma();
    std::vector<double> prev(n + 1, 0.0), cur(n + 1, 0.0), next(n + 1, 0.0);
    prev[0] = s.f1[0];
    prev[1] = s.f1[1];
    cur[0] = s.f2[0];
    cur[1] = s.f2[1];
    cur[2] = s.f2[2];
    // cur holds f_m on entry, prev holds f_{m-1}
    for (std::size_t m = 2; m < n; ++m) {
        next[0] = (1 - b) * cur[0];
        for (std::size_t j = 0; j + 1 <= m + 1; ++j)
            next[j + 1] = (1 - b) * cur[j + 1] + (1 - a) * cur[j] - g * prev[j];
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    return cur;
}

}  // namespace detail

/// Exact pmf of K_n by the three-term recursion.
inline Pmf pmf(const DiscreteParams& dp, const InitialDistribution& iota)
{
    return {dp.n(), detail::recurse(dp, iota, PhaseSelector::total)};
}

/// f-hat_n^tau, the joint law of K_n and the terminal phase.
inline PartialPmf
partial_pmf(const DiscreteParams& dp, const InitialDistribution& iota, Phase tau)
{
    PartialPmf p;
    p.n = dp.n();
    p.tau = tau;
    p.values = detail::recurse(dp, iota, select(tau));
    return p;
}

/// Law of K_n given Y_n = tau.
inline Pmf
conditional_pmf(const DiscreteParams& dp, const InitialDistribution& iota, Phase tau)
{
    double p_tau = state_prob_discrete(dp.n(), dp, iota, tau);
    if (!(p_tau > 0))
        throw DomainError(std::string("cannot condition on phase '")
                          + to_string(tau) + "' with probability zero");
    PartialPmf part = partial_pmf(dp, iota, tau);
    Pmf out{part.n, std::move(part.values)};
    for (double& v : out.values)
        v /= p_tau;
    return out;
}

//---------------------------------------------------------------------------//
// Exhaustive path enumeration (test oracle)
//---------------------------------------------------------------------------//

inline constexpr std::size_t bruteforce_max_n = 20;

namespace detail {

// Returns (total, partial F, partial A) by summing over all 2^n paths.
inline std::vector<std::vector<double>>
enumerate_paths(const DiscreteParams& dp, const InitialDistribution& iota)
{
    const std::size_t n = dp.n();
    if (n > bruteforce_max_n)
        throw ResourceError("path enumeration limited to n <= "
                            + std::to_string(bruteforce_max_n));
    const double a = dp.a(), b = dp.b();
    // P[from][to] with index 0 = F, 1 = A
    const double P[2][2] = {{1 - a, a}, {b, 1 - b}};
    std::vector<std::vector<double>> acc(3, std::vector<double>(n + 1, 0.0));
    const std::uint64_t npaths = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < npaths; ++mask) {
        // bit k set means Y_{k+1} = A
        int state = static_cast<int>(mask & 1u);
        double w = state == 0 ? iota.iota_F() : iota.iota_A();
        std::size_t k = state == 0 ? 1 : 0;
        for (std::size_t step = 1; step < n && w != 0.0; ++step) {
            int nxt = static_cast<int>((mask >> step) & 1u);
            w *= P[state][nxt];
            state = nxt;
            k += (state == 0);
        }
        if (w == 0.0)
            continue;
        acc[0][k] += w;
        acc[state == 0 ? 1 : 2][k] += w;
    }
    return acc;
}

}  // namespace detail

/// K_n law by enumerating every state path; cost O(n 2^n), n <= 20.
inline Pmf
pmf_bruteforce(const DiscreteParams& dp, const InitialDistribution& iota)
{
    auto acc = detail::enumerate_paths(dp, iota);
    return {dp.n(), std::move(acc[0])};
}

inline PartialPmf partial_pmf_bruteforce(const DiscreteParams& dp,
                                         const InitialDistribution& iota,
                                         Phase tau)
{
    auto acc = detail::enumerate_paths(dp, iota);
    PartialPmf p;
    p.n = dp.n();
    p.tau = tau;
    p.values = std::move(acc[tau == Phase::free ? 1 : 2]);
    return p;
}

//---------------------------------------------------------------------------//
// Generating functions
//---------------------------------------------------------------------------//

struct RootPair {
    cplx alpha;
    cplx beta;
};

/// Roots of x^2 - ((1-a)s + 1 - b) x + (1-a-b) s. The larger-magnitude root
/// is formed directly and the other one from the product to avoid
/// cancellation.
inline RootPair root_pair(cplx s, double a, double b)
{
    const cplx p = (1 - a) * s + (1 - b);
    const cplx q = (1 - a - b) * s;
    const cplx d = (1 - a) * s - (1 - b);
    const cplx sq = std::sqrt(d * d + 4 * a * b * s);
    const cplx plus = p + sq, minus = p - sq;
    if (std::abs(plus) >= std::abs(minus)) {
        cplx alpha = plus / 2.0;
        return {alpha, alpha == 0.0 ? cplx{} : q / alpha};
    }
    cplx beta = minus / 2.0;
    return {beta == 0.0 ? cplx{} : q / beta, beta};
}

namespace detail {

inline cplx expm1(cplx z)
{
    const double x = z.real(), y = z.imag();
    const double sh = std::sin(y / 2);
    return {std::expm1(x) * std::cos(y) - 2 * sh * sh, std::exp(x) * std::sin(y)};
}

// h_m = (alpha^m - beta^m) / (alpha - beta), continuous through
// alpha = beta where it equals m ((alpha + beta) / 2)^(m-1).
inline cplx h_seq(const RootPair& r, std::size_t m)
{
    if (m == 0)
        return 0.0;
    const double md = static_cast<double>(m);
    cplx big = r.alpha, small = r.beta;
    if (std::abs(small) > std::abs(big))
        std::swap(big, small);
    if (big == 0.0)
        return m == 1 ? 1.0 : 0.0;
    if (std::abs(big - small) < 1e-9 * (std::abs(big) + std::abs(small)))
        return md * std::pow((big + small) / 2.0, md - 1);
    const cplx ratio = small / big;
    cplx geo;  // (1 - ratio^m) / (1 - ratio)
    if (std::abs(1.0 - ratio) > 0.5) {
        geo = (1.0 - std::pow(ratio, md)) / (1.0 - ratio);
    } else {
        const cplx L = std::log(ratio);
        geo = expm1(md * L) / expm1(L);
    }
    return std::pow(big, md - 1) * geo;
}

// Generating function as c0 h_{n-1} - c1 alpha beta h_{n-2}, where c0, c1
// are fixed by the seeds f_1, f_2.
inline cplx pgf_partial_sum(const DiscreteParams& dp,
                            const InitialDistribution& iota,
                            PhaseSelector sel,
                            cplx s)
{
    const Seeds sd = seeds(dp, iota, sel);
    const cplx c1 = sd.f1[0] + sd.f1[1] * s;
    const std::size_t n = dp.n();
    if (n == 1)
        return c1;
    const cplx c0 = sd.f2[0] + s * (sd.f2[1] + s * sd.f2[2]);
    const RootPair r = root_pair(s, dp.a(), dp.b());
    return c0 * h_seq(r, n - 1) - c1 * (r.alpha * r.beta) * h_seq(r, n - 2);
}

}  // namespace detail

/// Closed-form pgf of K_n (total) or of K_n given Y_n = tau.
inline cplx pgf(const DiscreteParams& dp,
                const InitialDistribution& iota,
                PhaseSelector sel,
                cplx s)
{
    cplx g = detail::pgf_partial_sum(dp, iota, sel, s);
    if (sel == PhaseSelector::total)
        return g;
    Phase tau = sel == PhaseSelector::free ? Phase::free : Phase::adsorbed;
    double p_tau = state_prob_discrete(dp.n(), dp, iota, tau);
    if (!(p_tau > 0))
        throw DomainError(std::string("cannot condition on phase '")
                          + to_string(tau) + "' with probability zero");
    return g / p_tau;
}

/// Sum_j f(j) s^j by Horner's rule.
inline cplx series_sum(const Pmf& p, cplx s)
{
    cplx acc = 0.0;
    for (std::size_t j = p.values.size(); j-- > 0;)
        acc = acc * s + p.values[j];
    return acc;
}

struct PmfMoments {
    double mean;
    double variance;
};

/// Moments of j under f / sum(f); for a partial pmf these are the moments
/// conditional on the terminal phase.
inline PmfMoments pmf_moments(const Pmf& p)
{
    double m1 = 0, m2 = 0, mass = 0;
    for (std::size_t j = 0; j < p.values.size(); ++j) {
        double jd = static_cast<double>(j);
        mass += p.values[j];
        m1 += jd * p.values[j];
        m2 += jd * jd * p.values[j];
    }
    m1 /= mass;
    m2 /= mass;
    double var = m2 - m1 * m1;
    return {m1, var < 0 && var > -1e-9 * (1 + m2) ? 0.0 : var};
}

inline void write_csv(std::ostream& os, const Pmf& p)
{
    CsvWriter w(os);
    w.header({"j", "probability"});
    for (std::size_t j = 0; j < p.values.size(); ++j)
        w.row({std::to_string(j), format_real(p.values[j])});
}

}  // namespace kinetic
