#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "kinetic/moments.hpp"
#include "kinetic/simulate.hpp"
#include "oracles.hpp"

using namespace kinetic;

namespace {

const KineticParams kRef(1, 1, 0.01, 1);
constexpr double kT = 3;

std::size_t count_free(const SampleSet& s)
{
    std::size_t k = 0;
    for (Phase ph : s.phases)
        k += ph == Phase::free;
    return k;
}

}  // namespace

TEST(Simulate, DeterministicAcrossWorkers)
{
    auto a = simulate_ctmc(kT, InitialDistribution(0.5), kRef, 20000, 11, 1);
    auto b = simulate_ctmc(kT, InitialDistribution(0.5), kRef, 20000, 11, 3);
    EXPECT_EQ(a.positions, b.positions);
    EXPECT_EQ(a.phases, b.phases);
    auto c = simulate_ctmc(kT, InitialDistribution(0.5), kRef, 20000, 12, 1);
    EXPECT_NE(a.positions, c.positions);
}

TEST(Simulate, RejectsBadArguments)
{
    EXPECT_THROW(simulate_ctmc(kT, InitialDistribution(1.0), kRef, 0, 1), ParameterError);
    EXPECT_THROW(simulate_ctmc(0, InitialDistribution(1.0), kRef, 10, 1), DomainError);
    EXPECT_THROW(simulate_uniformized(kT, 0.5, InitialDistribution(1.0), kRef, 10, 1),
                 ParameterError);
}

TEST(Simulate, NoSorptionStaysFree)
{
    KineticParams p(1e-12, 1, 0.01, 1);
    DiscreteParams dp(50, kT, p);
    auto s = simulate_discrete(dp, InitialDistribution::free(), p, 20000, 3);
    EXPECT_EQ(count_free(s), s.size());
    auto e = empirical_summary(s, PhaseSelector::free);
    EXPECT_NEAR(e.stats.mean, kT, 4 * e.stats.se_mean);
    EXPECT_NEAR(e.stats.variance, 2 * 0.01 * kT, 4 * e.stats.se_variance);
}

TEST(Simulate, PhaseFrequencies)
{
    InitialDistribution io(0.2);
    const double want = state_prob_continuous(kT, kRef, io, Phase::free);
    const std::size_t N = 200000;
    for (auto s : {simulate_ctmc(kT, io, kRef, N, 5),
                   simulate_uniformized(kT, 2.5, io, kRef, N, 6)}) {
        const double f = static_cast<double>(count_free(s)) / N;
        EXPECT_NEAR(f, want, 4 * std::sqrt(want * (1 - want) / N)) << to_string(s.model);
    }
    DiscreteParams dp(300, kT, kRef);
    auto d = simulate_discrete(dp, io, kRef, 50000, 7);
    const double wd = state_prob_discrete(300, dp, io, Phase::free);
    EXPECT_NEAR(static_cast<double>(count_free(d)) / 50000, wd, 4 * std::sqrt(wd * (1 - wd) / 50000));
}

TEST(Simulate, AtomFractionAmongAdsorbedStarts)
{
    const std::size_t N = 200000;
    auto s = simulate_ctmc(kT, InitialDistribution::adsorbed(), kRef, N, 9);
    std::size_t terminal_a = 0, never_moved = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (s.phases[i] != Phase::adsorbed)
            continue;
        ++terminal_a;
        never_moved += s.occupation[i] == 0;
    }
    const double kappa = std::exp(-kT) / oracle::transition(1, 1, kT)[1][1];
    const double f = static_cast<double>(never_moved) / terminal_a;
    EXPECT_NEAR(f, kappa, 4 * std::sqrt(kappa * (1 - kappa) / terminal_a));
}

TEST(Simulate, MomentsMatchClosedForm)
{
    InitialDistribution io(0.7);
    const std::size_t N = 200000;
    for (auto sel : {PhaseSelector::free, PhaseSelector::adsorbed}) {
        auto ms = moments_limit(kT, io, sel, kRef);
        for (auto s : {simulate_ctmc(kT, io, kRef, N, 21),
                       simulate_uniformized(kT, 1.0, io, kRef, N, 22)}) {
            auto e = empirical_summary(s, sel);
            EXPECT_NEAR(e.stats.mean, ms.mean, 4 * e.stats.se_mean) << to_string(s.model);
            EXPECT_NEAR(e.stats.variance, ms.variance, 4 * e.stats.se_variance)
                << to_string(s.model);
        }
    }
}

TEST(Simulate, UniformizationRateDoesNotChangeLaw)
{
    InitialDistribution io(1.0);
    const std::size_t N = 100000;
    auto a = simulate_uniformized(kT, 1.0, io, kRef, N, 31);
    auto b = simulate_uniformized(kT, 10.0, io, kRef, N, 32);
    auto c = simulate_ctmc(kT, io, kRef, N, 33);
    const double crit = ks_critical(0.001, N, N);
    EXPECT_LT(ks_statistic(a.positions, b.positions), crit);
    EXPECT_LT(ks_statistic(a.positions, c.positions), crit);
}

TEST(Simulate, SummaryOfEmptyPhaseIsDomainError)
{
    KineticParams p(1e-12, 1, 0.01, 1);
    auto s = simulate_ctmc(1, InitialDistribution::free(), p, 1000, 1);
    auto e = empirical_summary(s, PhaseSelector::total);
    EXPECT_EQ(e.count_free, 1000u);
    EXPECT_EQ(e.count_adsorbed, 0u);
    EXPECT_THROW(empirical_summary(s, PhaseSelector::adsorbed), DomainError);
}

TEST(Simulate, Csv)
{
    auto s = simulate_ctmc(1, InitialDistribution::free(), kRef, 3, 1);
    std::ostringstream os;
    write_csv(os, s);
    EXPECT_NE(os.str().find("position,phase\n"), std::string::npos);
}
