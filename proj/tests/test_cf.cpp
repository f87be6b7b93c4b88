#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "kinetic/cf.hpp"
#include "oracles.hpp"

using namespace kinetic;

namespace {

const PhaseSelector kAll[3] = {PhaseSelector::total, PhaseSelector::free, PhaseSelector::adsorbed};

struct Draw {
    KineticParams p;
    InitialDistribution io;
    double t;
};

Draw random_draw(std::mt19937_64& g)
{
    std::uniform_real_distribution<double> r(0.05, 3), u(0, 1), v(-2, 2);
    return {KineticParams(r(g), r(g), r(g) / 10, v(g)), InitialDistribution(u(g)), r(g)};
}

}  // namespace

TEST(Theta, AtZeroFrequency)
{
    KineticParams p(0.7, 1.9, 0.3, 2);
    auto th = theta(0, p);
    EXPECT_NEAR(std::abs(th.theta_A - 2.6), 0, 1e-15);
    EXPECT_NEAR(std::abs(th.theta_F - 2.6), 0, 1e-15);
}

TEST(Theta, Identities)
{
    std::mt19937_64 g(31);
    std::uniform_real_distribution<double> uu(-50, 50);
    for (int i = 0; i < 500; ++i) {
        auto d = random_draw(g);
        const double u = uu(g), lam = d.p.lambda(), mu = d.p.mu();
        auto th = theta(u, d.p);
        const cplx w{d.p.D() * u * u, -d.p.v() * u};
        const cplx root = std::sqrt((w + lam - mu) * (w + lam - mu) + 4 * lam * mu);
        EXPECT_GE(th.r.real(), 0);
        EXPECT_LE(std::abs(th.theta_A + th.theta_F - 2.0 * th.r), 1e-12 * std::abs(th.r));
        EXPECT_LE(std::abs(std::abs(th.r) - std::abs(root)), 1e-12 * std::abs(root));
        EXPECT_LE(std::abs(th.theta_F - th.theta_A - 2.0 * w), 1e-12 * std::max(1.0, std::abs(w)));
        const cplx lhs = (th.theta_A - lam + mu) * (th.theta_F + lam - mu);
        EXPECT_LE(std::abs(lhs - 4 * lam * mu), 1e-10 * 4 * lam * mu);
    }
}

TEST(Theta, LargeFrequencyRates)
{
    KineticParams p(1, 1, 1, 0);
    const double u = 1e3;
    auto th = theta(u, p);
    EXPECT_NEAR(std::abs(u * u * th.theta_A), 2, 0.02);
    EXPECT_NEAR(std::abs(th.theta_F / (u * u)), 2, 0.02);

    KineticParams q(1.3, 0.6, 0.4, 0.9);
    auto tq = theta(u, q);
    EXPECT_NEAR(std::abs(u * u * tq.delta) / (2 * 1.3 * 0.6 / 0.4), 1, 0.01);
    EXPECT_NEAR(std::abs(tq.theta_F / (u * u)) / (2 * 0.4), 1, 0.01);
}

TEST(Cf, NormalizedAtZero)
{
    std::mt19937_64 g(37);
    for (int i = 0; i < 50; ++i) {
        auto d = random_draw(g);
        for (auto sel : kAll)
            EXPECT_NEAR(std::abs(cf(d.t, 0, d.io, sel, d.p) - 1.0), 0, 1e-14);
    }
}

TEST(Cf, HermitianAndBounded)
{
    std::mt19937_64 g(41);
    auto d = random_draw(g);
    for (int i = 0; i < 1000; ++i) {
        const double u = -100 + 0.2 * i;
        for (auto sel : kAll) {
            const cplx a = cf(d.t, u, d.io, sel, d.p), b = cf(d.t, -u, d.io, sel, d.p);
            EXPECT_LE(std::abs(a - std::conj(b)), 1e-14);
            EXPECT_LE(std::abs(a), 1 + 1e-12);
        }
    }
}

TEST(Cf, MixtureIdentity)
{
    std::mt19937_64 g(43);
    std::uniform_real_distribution<double> uu(-30, 30);
    for (int i = 0; i < 50; ++i) {
        auto d = random_draw(g);
        const double u = uu(g);
        const double pf = state_prob_continuous(d.t, d.p, d.io, Phase::free);
        const cplx mix = pf * cf(d.t, u, d.io, PhaseSelector::free, d.p)
                         + (1 - pf) * cf(d.t, u, d.io, PhaseSelector::adsorbed, d.p);
        EXPECT_LE(std::abs(cf(d.t, u, d.io, PhaseSelector::total, d.p) - mix), 1e-12);
    }
}

TEST(Cf, NoSorptionIsGaussian)
{
    KineticParams p(1e-8, 1, 0.2, 1.5);
    const double t = 2;
    for (double u : {0.3, 1.0, 4.0}) {
        const cplx want = std::exp(cplx{-0.2 * u * u * t, 1.5 * u * t});
        EXPECT_LE(std::abs(cf(t, u, InitialDistribution::free(), PhaseSelector::free, p) - want), 1e-6);
    }
}

TEST(Cf, DerivativesGiveMoments)
{
    // E[S] and E[S^2] for iota = (1, 0) from an independent small-t check:
    // a central difference of the CF at 0 against first-order kinetics.
    KineticParams p(0.8, 1.1, 0.05, 1.3);
    const double t = 0.01, h = 1e-4;
    InitialDistribution io(1.0);
    const cplx cp = cf(t, h, io, PhaseSelector::total, p), cm = cf(t, -h, io, PhaseSelector::total, p);
    const double mean = ((cp - cm) / (2 * h)).imag();
    // E[U(t)] = t - lambda t^2 / 2 + O(t^3)
    EXPECT_NEAR(mean, 1.3 * (t - 0.8 * t * t / 2), 1e-6);
}

TEST(Cf, DiscreteExamples)
{
    KineticParams p(1, 1, 0.01, 1);
    InitialDistribution io(0.35);
    auto dp1 = DiscreteParams(1, 0.5, p);
    for (double u : {0.0, 1.0, 7.0}) {
        const cplx step = std::exp(cplx{-0.01 * 0.5 * u * u, 0.5 * u});
        EXPECT_LE(std::abs(cf_discrete(dp1, u, io, PhaseSelector::total, p) - (0.65 + 0.35 * step)), 1e-15);
    }
    auto dp = DiscreteParams(1000, 1, p);
    EXPECT_NEAR(std::abs(cf_discrete(dp, 0, io, PhaseSelector::free, p) - 1.0), 0, 1e-12);

    double prev = 1;
    for (std::size_t n : {100, 1000, 10000}) {
        const double e = std::abs(cf_discrete(DiscreteParams(n, 1, p), 1, InitialDistribution::free(),
                                              PhaseSelector::total, p)
                                  - cf(1, 1, InitialDistribution::free(), PhaseSelector::total, p));
        EXPECT_LT(e, prev);
        prev = e;
    }
}

TEST(Cf, DiscreteConvergesLikeOneOverN)
{
    KineticParams p(1, 1, 0.01, 1);
    const double t = 3;
    for (auto sel : kAll) {
        double prev = 1;
        for (std::size_t n : {100, 1000, 10000}) {
            DiscreteParams dp(n, t, p);
            double sup = 0;
            for (double u = -20; u <= 20; u += 0.25)
                sup = std::max(sup, std::abs(cf_discrete(dp, u, InitialDistribution::free(), sel, p)
                                             - cf(t, u, InitialDistribution::free(), sel, p)));
            EXPECT_LT(sup, prev);
            EXPECT_LE(sup, 10.0 / static_cast<double>(n));
            prev = sup;
        }
    }
}

TEST(Atom, Weight)
{
    KineticParams p(0.7, 1.3, 0.1, 1);
    EXPECT_EQ(atom_weight(2, InitialDistribution::free(), p), 0);
    for (double t : {0.1, 1.0, 3.0}) {
        auto P = oracle::transition(0.7, 1.3, t);
        const double want = std::exp(-1.3 * t) / P[1][1];
        EXPECT_NEAR(atom_weight(t, InitialDistribution::adsorbed(), p), want, 1e-12);
        const double A = std::exp(-2 * t);
        EXPECT_NEAR(atom_weight(t, InitialDistribution::adsorbed(), p), std::exp(-1.3 * t) * 2 / (0.7 + 1.3 * A),
                    1e-14);
    }
    EXPECT_LT(atom_weight(60, InitialDistribution::adsorbed(), p), 1e-30);
    const double k = atom_weight(1, InitialDistribution(0.4), p);
    EXPECT_GT(k, 0);
    EXPECT_LT(k, 1);
}

TEST(Atom, ContinuousPartRemovesAtom)
{
    KineticParams p(0.7, 1.3, 0.1, 1);
    InitialDistribution io(0.2);
    const double t = 1.5;
    const double kappa = atom_weight(t, io, p);
    for (double u : {0.0, 0.5, 3.0}) {
        const cplx full = cf(t, u, io, PhaseSelector::adsorbed, p);
        const cplx cont = cf_continuous_part(t, u, io, PhaseSelector::adsorbed, p);
        EXPECT_LE(std::abs(full - (kappa + cont)), 1e-14);
    }
}

TEST(TailBound, Examples)
{
    KineticParams p(1, 1, 1, 1);
    const double t = 1;
    EXPECT_THROW(cf_tail_bound(t, 0.1, p), DomainError);
    const double U0 = tail_crossover(p);
    double prev = cf_tail_bound(t, U0, p);
    EXPECT_GT(prev, 0);
    for (double u = U0 + 0.5; u < 200; u += 0.5) {
        const double b = cf_tail_bound(t, u, p);
        EXPECT_LE(b, prev);
        prev = b;
    }
    EXPECT_LE(std::abs(cf(t, 50, InitialDistribution::free(), PhaseSelector::free, p)), cf_tail_bound(t, 50, p));
    EXPECT_GE(cf_tail_bound(t, 100, p) / cf_tail_bound(t, 200, p), 4 - 1e-9);
}

TEST(TailBound, DominatesCfBeyondCrossover)
{
    std::mt19937_64 g(47);
    for (int i = 0; i < 20; ++i) {
        auto d = random_draw(g);
        const double U0 = tail_crossover(d.p);
        for (double f : {1.0, 1.5, 3.0, 10.0}) {
            const double u = U0 * f;
            const double b = cf_tail_bound(d.t, u, d.p);
            EXPECT_LE(std::abs(cf(d.t, u, d.io, PhaseSelector::free, d.p)), b);
            EXPECT_LE(std::abs(cf_continuous_part(d.t, u, d.io, PhaseSelector::adsorbed, d.p)), b);
        }
    }
}

TEST(Resolvent, Examples)
{
    KineticParams p(1, 1, 1, 0);
    auto z = resolvent_pair(2, 0, InitialDistribution(0.3), p, PhaseSelector::total);
    EXPECT_NEAR(std::abs(z.closed - 0.5), 0, 1e-15);
    EXPECT_NEAR(std::abs(z.numeric - 0.5), 0, 1e-8);

    auto r = resolvent_pair(1, 1, InitialDistribution::free(), p, PhaseSelector::total);
    EXPECT_NEAR(std::abs(r.closed - 0.6), 0, 1e-15);  // 3 / ((2 + 1) 2 - 1)
    EXPECT_LE(std::abs(r.numeric - r.closed), 1e-6);

    auto f = resolvent_pair(1, 1, InitialDistribution::free(), p, PhaseSelector::free);
    EXPECT_NEAR(std::abs(f.closed - 0.4), 0, 1e-15);
    EXPECT_LE(std::abs(f.numeric - f.closed), 1e-6);
    EXPECT_THROW(resolvent_pair(0, 1, InitialDistribution::free(), p, PhaseSelector::free), DomainError);
}
