// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Particle tracking under the n-step chain, the continuous-time chain and
// its uniformized representation.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"
#include "csv.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace kinetic {

enum class Model { discrete, ctmc, uniformized };

inline const char* to_string(Model m)
{
    switch (m) {
    case Model::discrete:
        return "discrete";
    case Model::ctmc:
        return "ctmc";
    case Model::uniformized:
        return "uniformized";
    }
    return "?";
}

struct SampleSet {
    std::vector<double> positions;
    std::vector<Phase> phases;  ///< terminal phase
    std::vector<double> occupation;  ///< time spent free (steps x dt)
    double t = 0;
    Model model = Model::ctmc;
    std::size_t n = 0;   ///< steps, discrete model
    double Lambda = 0;   ///< clock rate, uniformized model
    std::uint64_t seed = 0;

    std::size_t size() const { return positions.size(); }
};

namespace detail {

constexpr std::size_t particle_block = 4096;

template<class Particle>
SampleSet run_particles(std::size_t N, std::uint64_t seed, unsigned workers, Particle one)
{
    if (N == 0)
        throw ParameterError("particle count must be positive");
    SampleSet s;
    s.positions.resize(N);
    s.phases.resize(N);
    s.occupation.resize(N);
    s.seed = seed;
    parallel_for(
        (N + particle_block - 1) / particle_block,
        [&](std::size_t b) {
            const std::size_t end = std::min(N, (b + 1) * particle_block);
            for (std::size_t i = b * particle_block; i < end; ++i) {
                RngStream rng(seed, i);
                one(rng, s.positions[i], s.phases[i], s.occupation[i]);
            }
        },
        workers);
    return s;
}

inline Phase initial_phase(RngStream& rng, const InitialDistribution& iota)
{
    return rng.uniform() < iota.iota_F() ? Phase::free : Phase::adsorbed;
}

}  // namespace detail

/// n-step chain: each free step moves by Normal(v dt, 2 D dt).
inline SampleSet simulate_discrete(const DiscreteParams& dp,
                                   const InitialDistribution& iota,
                                   const KineticParams& p,
                                   std::size_t N,
                                   std::uint64_t seed,
                                   unsigned workers = 0)
{
    const double dt = dp.dt(), a = dp.a(), b = dp.b();
    const double drift = p.v() * dt, sd = std::sqrt(2 * p.D() * dt);
    const std::size_t n = dp.n();
    SampleSet s = detail::run_particles(
        N, seed, workers, [&](RngStream& rng, double& x, Phase& ph, double& occ) {
            Phase y = detail::initial_phase(rng, iota);
            double pos = 0;
            std::size_t k = 0;
            for (std::size_t step = 1; step <= n; ++step) {
                if (y == Phase::free) {
                    pos += drift + sd * rng.normal();
                    ++k;
                }
                if (step < n) {
                    const double u = rng.uniform();
                    if (y == Phase::free ? u < a : u < b)
                        y = y == Phase::free ? Phase::adsorbed : Phase::free;
                }
            }
            x = pos;
            ph = y;
            occ = static_cast<double>(k) * dt;
        });
    s.t = dp.t();
    s.model = Model::discrete;
    s.n = n;
    return s;
}

/// Continuous-time chain by exact exponential holding times; the position is
/// Normal(v U, 2 D U) given the free occupation time U.
inline SampleSet simulate_ctmc(double t,
                               const InitialDistribution& iota,
                               const KineticParams& p,
                               std::size_t N,
                               std::uint64_t seed,
                               unsigned workers = 0)
{
    if (!(t > 0))
        throw DomainError("time must be positive");
    const double lam = p.lambda(), mu = p.mu();
    SampleSet s = detail::run_particles(
        N, seed, workers, [&](RngStream& rng, double& x, Phase& ph, double& occ) {
            Phase y = detail::initial_phase(rng, iota);
            double clock = 0, U = 0;
            for (;;) {
                const double hold = rng.exponential(y == Phase::free ? lam : mu);
                if (clock + hold >= t) {
                    if (y == Phase::free)
                        U += t - clock;
                    break;
                }
                if (y == Phase::free)
                    U += hold;
                clock += hold;
                y = y == Phase::free ? Phase::adsorbed : Phase::free;
            }
            x = p.v() * U + std::sqrt(2 * p.D() * U) * rng.normal();
            ph = y;
            occ = U;
        });
    s.t = t;
    s.model = Model::ctmc;
    return s;
}

/// Uniformized chain: a Poisson clock of rate Lambda; at each tick the phase
/// switches with probability lambda / Lambda (from F) or mu / Lambda (from
/// A). Each free interval of length T adds Normal(v T, 2 D T); the last
/// interval is cut at t.
inline SampleSet simulate_uniformized(double t,
                                      double Lambda,
                                      const InitialDistribution& iota,
                                      const KineticParams& p,
                                      std::size_t N,
                                      std::uint64_t seed,
                                      unsigned workers = 0)
{
    if (!(t > 0))
        throw DomainError("time must be positive");
    if (!(Lambda >= std::max(p.lambda(), p.mu())))
        throw ParameterError("uniformization rate must be at least max(lambda, mu)");
    const double pF = p.lambda() / Lambda, pA = p.mu() / Lambda;
    const double v = p.v(), D2 = 2 * p.D();
    SampleSet s = detail::run_particles(
        N, seed, workers, [&](RngStream& rng, double& x, Phase& ph, double& occ) {
            Phase y = detail::initial_phase(rng, iota);
            double clock = 0, pos = 0, U = 0;
            for (;;) {
                double T = rng.exponential(Lambda);
                const bool last = clock + T >= t;
                if (last)
                    T = t - clock;
                if (y == Phase::free) {
                    pos += v * T + std::sqrt(D2 * T) * rng.normal();
                    U += T;
                }
                if (last)
                    break;
                clock += T;
                const double u = rng.uniform();
                if (y == Phase::free ? u < pF : u < pA)
                    y = y == Phase::free ? Phase::adsorbed : Phase::free;
            }
            x = pos;
            ph = y;
            occ = U;
        });
    s.t = t;
    s.model = Model::uniformized;
    s.Lambda = Lambda;
    return s;
}

struct EmpiricalSummary {
    std::size_t count_free = 0;
    std::size_t count_adsorbed = 0;
    PhaseSelector filter = PhaseSelector::total;
    SampleStats stats;  ///< positions passing the filter
};

/// Positions whose terminal phase passes the filter, in sample order.
inline std::vector<double> filter_positions(const SampleSet& s, PhaseSelector filter)
{
    std::vector<double> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (filter == PhaseSelector::total || select(s.phases[i]) == filter)
            out.push_back(s.positions[i]);
    }
    return out;
}

inline EmpiricalSummary empirical_summary(const SampleSet& s, PhaseSelector filter)
{
    EmpiricalSummary e;
    e.filter = filter;
    for (Phase ph : s.phases)
        (ph == Phase::free ? e.count_free : e.count_adsorbed)++;
    std::vector<double> x = filter_positions(s, filter);
    if (x.empty())
        throw DomainError(std::string("no particles in phase '")
                          + to_string(filter) + "'");
    e.stats = sample_stats(x);
    return e;
}

inline void write_csv(std::ostream& os, const SampleSet& s)
{
    CsvWriter w(os);
    w.meta("model", to_string(s.model)).meta("t", s.t).meta("seed", std::to_string(s.seed));
    w.header({"position", "phase"});
    for (std::size_t i = 0; i < s.size(); ++i)
        w.row({format_real(s.positions[i]), s.phases[i] == Phase::free ? "F" : "A"});
}

}  // namespace kinetic
