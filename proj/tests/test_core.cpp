#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kinetic/core.hpp"
#include "kinetic/params_io.hpp"
#include "oracles.hpp"

using namespace kinetic;

TEST(KineticParams, RejectsNonpositiveRates)
{
    EXPECT_THROW(KineticParams(0, 1, 1, 1), ParameterError);
    EXPECT_THROW(KineticParams(1, -1, 1, 1), ParameterError);
    EXPECT_THROW(KineticParams(1, 1, 0, 1), ParameterError);
    EXPECT_THROW(KineticParams(1, 1, 1, NAN), ParameterError);
    EXPECT_NO_THROW(KineticParams(1, 1, 1, -2));
}

TEST(InitialDistribution, MustSumToOne)
{
    EXPECT_THROW(InitialDistribution(0.5, 0.6), ParameterError);
    EXPECT_THROW(InitialDistribution(-0.1, 1.1), ParameterError);
    InitialDistribution io(0.3);
    EXPECT_DOUBLE_EQ(io.iota_A(), 0.7);
    EXPECT_EQ(io[Phase::free], 0.3);
}

TEST(StationaryInfo, ExcentricitiesCancel)
{
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> r(0.01, 5), u(0, 1);
    for (int i = 0; i < 200; ++i) {
        StationaryInfo st(KineticParams(r(g), r(g), 1, 1), InitialDistribution(u(g)));
        EXPECT_NEAR(st.pi_F() + st.pi_A(), 1, 1e-15);
        EXPECT_NEAR(st.pi_F() * st.eps_F() + st.pi_A() * st.eps_A(), 0, 1e-15);
        EXPECT_GT(st.A(3), 0);
        EXPECT_LE(st.A(0), 1);
    }
}

TEST(DiscreteParams, ProbabilitiesMustBeInUnitInterval)
{
    KineticParams p(1, 1, 1, 1);
    EXPECT_THROW(DiscreteParams(2, 3, p), ParameterError);  // a = 1.5
    EXPECT_THROW(DiscreteParams(0, 3, p), ParameterError);
    EXPECT_THROW(DiscreteParams::from_probabilities(3, 1.0, 0.5), ParameterError);
    DiscreteParams dp(300, 3, p);
    EXPECT_DOUBLE_EQ(dp.dt(), 0.01);
    EXPECT_DOUBLE_EQ(dp.a(), 0.01);
    EXPECT_DOUBLE_EQ(dp.gamma(), 0.98);
}

TEST(Translate, EngineeringExamples)
{
    // mu = Da_I v / (L R), lambda = (R - 1) mu, t = t_star / ((R - 1) mu)
    auto a = translate_engineering({100, 1.0, 3.0, 2, 1, 1});
    EXPECT_NEAR(a.params.lambda(), 0.5, 1e-15);
    EXPECT_NEAR(a.params.mu(), 0.5, 1e-15);
    EXPECT_NEAR(a.params.D(), 0.01, 1e-15);
    EXPECT_NEAR(a.t, 6, 1e-14);

    auto b = translate_engineering({100, 0.1, 3.6, 2, 1, 1});
    EXPECT_NEAR(b.params.lambda(), 0.05, 1e-15);
    EXPECT_NEAR(b.params.mu(), 0.05, 1e-15);
    EXPECT_NEAR(b.t, 72, 1e-12);
}

TEST(Translate, EngineeringRoundTrip)
{
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> r(0.05, 20);
    for (int i = 0; i < 100; ++i) {
        EngineeringParams ep{r(g) * 10, r(g), r(g), 1 + r(g), r(g), r(g)};
        auto tp = translate_engineering(ep);
        EXPECT_NEAR(tp.t * tp.params.mu() * (ep.R - 1), ep.t_star, 1e-12 * ep.t_star);
        auto back = to_engineering(tp.params, tp.t, ep.L);
        EXPECT_NEAR(back.Pe, ep.Pe, 1e-12 * ep.Pe);
        EXPECT_NEAR(back.Da_I, ep.Da_I, 1e-12 * ep.Da_I);
        EXPECT_NEAR(back.t_star, ep.t_star, 1e-12 * ep.t_star);
        EXPECT_NEAR(back.R, ep.R, 1e-12 * ep.R);
    }
}

TEST(Translate, EngineeringRejectsInvalid)
{
    EXPECT_THROW(translate_engineering({100, 1, 3, 1.0, 1, 1}), ParameterError);
    EXPECT_THROW(translate_engineering({-1, 1, 3, 2, 1, 1}), ParameterError);
}

TEST(Translate, Michalak)
{
    auto r = translate_michalak(2, 0.5);
    EXPECT_EQ(r.lambda, 1);
    EXPECT_EQ(r.mu, 0.5);
    auto s = translate_michalak(1, 1);
    EXPECT_EQ(s.lambda, 1);
    EXPECT_EQ(s.mu, 1);
    auto q = translate_michalak(0.37, 2.9);
    EXPECT_NEAR(q.lambda / q.mu, 0.37, 1e-15);
    EXPECT_THROW(translate_michalak(0, 1), ParameterError);
}

TEST(StateProb, DiscreteExamples)
{
    auto dp = DiscreteParams::from_probabilities(5, 0.2, 0.3);
    EXPECT_DOUBLE_EQ(state_prob_discrete(1, dp, InitialDistribution::free(), Phase::free), 1);
    EXPECT_NEAR(state_prob_discrete(2, dp, InitialDistribution::free(), Phase::free), 0.8, 1e-15);
    InitialDistribution stat(0.3 / 0.5);
    for (std::size_t k = 1; k <= 5; ++k)
        EXPECT_NEAR(state_prob_discrete(k, dp, stat, Phase::adsorbed), 0.4, 1e-15);
    EXPECT_THROW(state_prob_discrete(0, dp, stat, Phase::free), DomainError);
    EXPECT_THROW(state_prob_discrete(6, dp, stat, Phase::free), DomainError);
}

TEST(StateProb, DiscreteMatchesMatrixPower)
{
    auto dp = DiscreteParams::from_probabilities(12, 0.35, 0.15);
    InitialDistribution io(0.2);
    double row[2] = {io.iota_F(), io.iota_A()};
    for (std::size_t k = 1; k <= 12; ++k) {
        EXPECT_NEAR(state_prob_discrete(k, dp, io, Phase::free), row[0], 1e-14);
        const double f = row[0] * 0.65 + row[1] * 0.15;
        row[1] = row[0] * 0.35 + row[1] * 0.85;
        row[0] = f;
    }
}

TEST(StateProb, ContinuousExamples)
{
    KineticParams p(1, 1, 1, 1);
    EXPECT_NEAR(state_prob_continuous(std::log(2.0), p, InitialDistribution::free(), Phase::free), 0.625, 1e-15);
    EXPECT_EQ(state_prob_continuous(0, p, InitialDistribution(0.3), Phase::free), 0.3);
    KineticParams q(2, 0.5, 1, 1);
    InitialDistribution stat(0.5 / 2.5);
    for (double t : {0.1, 1.0, 10.0})
        EXPECT_NEAR(state_prob_continuous(t, q, stat, Phase::free), 0.2, 1e-15);
    EXPECT_THROW(state_prob_continuous(-1, p, stat, Phase::free), DomainError);
}

TEST(StateProb, ContinuousMatchesMatrixExponential)
{
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> r(0.05, 4), u(0, 1);
    for (int i = 0; i < 50; ++i) {
        KineticParams p(r(g), r(g), 1, 1);
        InitialDistribution io(u(g));
        const double t = r(g);
        auto P = oracle::transition(p.lambda(), p.mu(), t);
        const double pf = io.iota_F() * P[0][0] + io.iota_A() * P[1][0];
        EXPECT_NEAR(state_prob_continuous(t, p, io, Phase::free), pf, 1e-13);
        EXPECT_NEAR(state_prob_continuous(t, p, io, Phase::free)
                        + state_prob_continuous(t, p, io, Phase::adsorbed),
                    1, 1e-14);
    }
}

TEST(StateProb, DiscreteConvergesToContinuous)
{
    KineticParams p(1, 2, 1, 1);
    InitialDistribution io(1.0);
    const double t = 1.5, exact = state_prob_continuous(t, p, io, Phase::free);
    double prev = 1;
    for (std::size_t n : {100, 200, 400, 800, 1600}) {
        DiscreteParams dp(n, t, p);
        const double err = std::abs(state_prob_discrete(n, dp, io, Phase::free) - exact);
        EXPECT_LT(err, prev);
        EXPECT_LT(err * static_cast<double>(n), 1.0);
        prev = err;
    }
}

TEST(ChooseN, Examples)
{
    EXPECT_EQ(choose_n(3, KineticParams(1, 1, 1, 1)), 300u);
    EXPECT_EQ(choose_n(1, KineticParams(2, 1, 1, 1), 0.5), 4u);
    EXPECT_THROW(choose_n(1, KineticParams(2, 1, 1, 1), 1.5), ParameterError);
    const auto n = choose_n(7.3, KineticParams(0.3, 1.7, 1, 1), 0.01);
    EXPECT_LE(1.7 * 7.3 / static_cast<double>(n), 0.01);
    EXPECT_GT(1.7 * 7.3 / static_cast<double>(n - 1), 0.01);
}

TEST(ParamsIo, RateKeys)
{
    auto r = resolve(parse_parameters("lambda = 1\nmu: 2 # comment\nD=0.5\nv = -1\nt=4\niota_F=0.25\nn=10\n"));
    EXPECT_EQ(r.params.lambda(), 1);
    EXPECT_EQ(r.params.mu(), 2);
    EXPECT_EQ(r.params.v(), -1);
    EXPECT_EQ(r.t, 4);
    EXPECT_EQ(r.iota.iota_F(), 0.25);
    ASSERT_TRUE(r.n.has_value());
    EXPECT_EQ(*r.n, 10u);
}

TEST(ParamsIo, EngineeringKeysTakePrecedence)
{
    auto r = resolve(parse_parameters("lambda=9\nmu=9\nD=9\nv=1\nt=9\nPe=100\nDa_I=1\nt_star=3\nR=2\nL=1\n"));
    EXPECT_NEAR(r.params.lambda(), 0.5, 1e-15);
    EXPECT_NEAR(r.params.D(), 0.01, 1e-15);
    EXPECT_NEAR(r.t, 6, 1e-14);
}

TEST(ParamsIo, Errors)
{
    EXPECT_THROW(parse_parameters("lambda 1\n"), ParameterError);
    EXPECT_THROW(parse_parameters("gamma = 1\n"), ParameterError);
    EXPECT_THROW(parse_parameters("mu = 1x\n"), ParameterError);
    EXPECT_THROW(resolve(parse_parameters("lambda=1\nmu=1\nv=1\nt=1\n")), ParameterError);
    EXPECT_THROW(resolve(parse_parameters("Pe=100\nDa_I=1\n")), ParameterError);
    EXPECT_THROW(load_parameters("/nonexistent/params.txt"), ParameterError);
}
