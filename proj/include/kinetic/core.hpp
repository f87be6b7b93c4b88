// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Parameter containers, convention translations and state probabilities
// shared by every other header of the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace kinetic {

//---------------------------------------------------------------------------//
// Errors. The CLI maps each category onto its own exit code.
//---------------------------------------------------------------------------//

/// Invalid or inconsistent model parameters.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A request outside the domain of an operation (e.g. conditioning on a
/// phase that has probability zero).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A numerical method cannot certify the requested accuracy.
class AccuracyError : public std::runtime_error {
  public:
    explicit AccuracyError(const std::string& what, double suggestion = 0.0)
        : std::runtime_error(what), suggestion_(suggestion)
    {
    }
    /// Suggested value of the limiting knob (radius, grid size, ...), or 0.
    double suggestion() const noexcept { return suggestion_; }

  private:
    double suggestion_;
};

/// An iterative numerical procedure failed to converge.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The request exceeds a resource limit (memory or enumeration size).
class ResourceError : public std::length_error {
  public:
    using std::length_error::length_error;
};

//---------------------------------------------------------------------------//
// Phases
//---------------------------------------------------------------------------//

enum class Phase { free, adsorbed };

/// Phase selection for distributions: unconditional or conditioned on the
/// terminal phase.
enum class PhaseSelector { total, free, adsorbed };

inline PhaseSelector select(Phase p)
{
    return p == Phase::free ? PhaseSelector::free : PhaseSelector::adsorbed;
}

inline const char* to_string(Phase p)
{
    return p == Phase::free ? "free" : "adsorbed";
}

inline const char* to_string(PhaseSelector p)
{
    switch (p) {
    case PhaseSelector::total:
        return "total";
    case PhaseSelector::free:
        return "free";
    case PhaseSelector::adsorbed:
        return "adsorbed";
    }
    return "?";
}

inline PhaseSelector parse_phase(const std::string& s)
{
    if (s == "total")
        return PhaseSelector::total;
    if (s == "free" || s == "F")
        return PhaseSelector::free;
    if (s == "adsorbed" || s == "A")
        return PhaseSelector::adsorbed;
    throw ParameterError("unknown phase '" + s + "'");
}

//---------------------------------------------------------------------------//
// Parameter types
//---------------------------------------------------------------------------//

/// Rates and transport coefficients of the continuous model.
class KineticParams {
  public:
    KineticParams(double lambda, double mu, double D, double v)
        : lambda_(lambda), mu_(mu), D_(D), v_(v)
    {
        if (!(lambda > 0) || !(mu > 0) || !(D > 0) || !std::isfinite(v)
            || !std::isfinite(lambda) || !std::isfinite(mu)
            || !std::isfinite(D)) {
            throw ParameterError(
                "kinetic parameters require lambda > 0, mu > 0, D > 0 and "
                "finite v");
        }
    }

    /// Free -> adsorbed rate.
    double lambda() const noexcept { return lambda_; }
    /// Adsorbed -> free rate.
    double mu() const noexcept { return mu_; }
    double D() const noexcept { return D_; }
    double v() const noexcept { return v_; }
    double total_rate() const noexcept { return lambda_ + mu_; }

  private:
    double lambda_;
    double mu_;
    double D_;
    double v_;
};

/// Initial phase distribution (iota_F, iota_A).
class InitialDistribution {
  public:
    static constexpr double sum_tolerance = 1e-12;

    explicit InitialDistribution(double iota_F)
        : InitialDistribution(iota_F, 1.0 - iota_F)
    {
    }

    InitialDistribution(double iota_F, double iota_A)
        : iota_F_(iota_F), iota_A_(iota_A)
    {
        if (!(iota_F >= 0) || !(iota_A >= 0)
            || std::abs(iota_F + iota_A - 1.0) > sum_tolerance) {
            throw ParameterError(
                "initial distribution must be a probability vector");
        }
    }

    static InitialDistribution free() { return InitialDistribution(1.0, 0.0); }
    static InitialDistribution adsorbed()
    {
        return InitialDistribution(0.0, 1.0);
    }

    double iota_F() const noexcept { return iota_F_; }
    double iota_A() const noexcept { return iota_A_; }
    double operator[](Phase p) const noexcept
    {
        return p == Phase::free ? iota_F_ : iota_A_;
    }

  private:
    double iota_F_;
    double iota_A_;
};

/// Stationary distribution of the two-state chain and the excentricities of
/// an initial distribution relative to it.
class StationaryInfo {
  public:
    StationaryInfo(const KineticParams& p, const InitialDistribution& iota)
        : StationaryInfo(p.lambda(), p.mu(), iota)
    {
    }

    /// Rates may be replaced by the one-step probabilities (a, b): only
    /// their ratio matters.
    StationaryInfo(double lambda, double mu, const InitialDistribution& iota)
        : rate_(lambda + mu)
        , pi_F_(mu / (lambda + mu))
        , pi_A_(lambda / (lambda + mu))
        , eps_F_(1.0 - iota.iota_F() / pi_F_)
        , eps_A_(1.0 - iota.iota_A() / pi_A_)
    {
    }

    double pi_F() const noexcept { return pi_F_; }
    double pi_A() const noexcept { return pi_A_; }
    double pi(Phase p) const noexcept
    {
        return p == Phase::free ? pi_F_ : pi_A_;
    }
    double eps_F() const noexcept { return eps_F_; }
    double eps_A() const noexcept { return eps_A_; }
    double eps(Phase p) const noexcept
    {
        return p == Phase::free ? eps_F_ : eps_A_;
    }
    /// exp(-(lambda + mu) t)
    double A(double t) const { return std::exp(-rate_ * t); }

  private:
    double rate_;
    double pi_F_;
    double pi_A_;
    double eps_F_;
    double eps_A_;
};

/// Time discretization of [0, t] into n steps, with the one-step switching
/// probabilities a = lambda dt and b = mu dt.
class DiscreteParams {
  public:
    DiscreteParams(std::size_t n, double t, const KineticParams& p)
        : DiscreteParams(n, t, p.lambda() * (t / static_cast<double>(n)),
                         p.mu() * (t / static_cast<double>(n)))
    {
    }

    /// Pure chain parameters; the time step is taken as 1.
    static DiscreteParams from_probabilities(std::size_t n, double a, double b)
    {
        return DiscreteParams(n, static_cast<double>(n), a, b);
    }

    std::size_t n() const noexcept { return n_; }
    double t() const noexcept { return t_; }
    double dt() const noexcept { return dt_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    /// Second eigenvalue of the transition matrix, 1 - a - b.
    double gamma() const noexcept { return 1.0 - a_ - b_; }

  private:
    DiscreteParams(std::size_t n, double t, double a, double b)
        : n_(n), t_(t), dt_(t / static_cast<double>(n)), a_(a), b_(b)
    {
        if (n == 0)
            throw ParameterError("number of steps must be positive");
        if (!(t > 0))
            throw ParameterError("time horizon must be positive");
        if (!(a > 0 && a < 1) || !(b > 0 && b < 1)) {
            throw ParameterError(
                "switching probabilities a = lambda*dt and b = mu*dt must lie "
                "in (0, 1); increase n");
        }
    }

    std::size_t n_;
    double t_;
    double dt_;
    double a_;
    double b_;
};

/// Dimensionless parameters of the uniform-injection column experiment.
struct EngineeringParams {
    double Pe;      ///< Peclet number v L / D
    double Da_I;    ///< Damkohler number of the first kind mu L R / v
    double t_star;  ///< dimensionless time mu (R - 1) t
    double R;       ///< retardation coefficient 1 + lambda / mu
    double L;       ///< injection length
    double v;       ///< velocity

    void validate() const
    {
        if (!(Pe > 0) || !(Da_I > 0) || !(t_star > 0) || !(L > 0) || !(v > 0))
            throw ParameterError(
                "engineering parameters Pe, Da_I, t_star, L, v must be "
                "positive");
        if (!(R > 1))
            throw ParameterError("retardation coefficient R must exceed 1");
    }
};

//---------------------------------------------------------------------------//
// Translations
//---------------------------------------------------------------------------//

struct TranslatedParams {
    KineticParams params;
    double t;
};

inline TranslatedParams translate_engineering(const EngineeringParams& ep)
{
    ep.validate();
    double mu = ep.Da_I * ep.v / (ep.L * ep.R);
    double lambda = (ep.R - 1.0) * mu;
    double D = ep.v * ep.L / ep.Pe;
    double t = ep.t_star / ((ep.R - 1.0) * mu);
    return {KineticParams(lambda, mu, D, ep.v), t};
}

/// Inverse of translate_engineering for a given injection length.
inline EngineeringParams
to_engineering(const KineticParams& p, double t, double L)
{
    if (!(L > 0) || !(p.v() > 0))
        throw ParameterError("engineering form needs L > 0 and v > 0");
    double R = 1.0 + p.lambda() / p.mu();
    return EngineeringParams{p.v() * L / p.D(),
                             p.mu() * L * R / p.v(),
                             p.mu() * (R - 1.0) * t,
                             R,
                             L,
                             p.v()};
}

struct RatePair {
    double lambda;
    double mu;
};

/// Distribution ratio beta = lambda / mu and mass transfer coefficient k = mu.
inline RatePair translate_michalak(double beta, double k)
{
    if (!(beta > 0) || !(k > 0))
        throw ParameterError("beta and k must be positive");
    return {beta * k, k};
}

//---------------------------------------------------------------------------//
// State probabilities
//---------------------------------------------------------------------------//

/// P(Y_k = tau) for the discrete chain, 1 <= k <= n.
inline double state_prob_discrete(std::size_t k,
                                  const DiscreteParams& dp,
                                  const InitialDistribution& iota,
                                  Phase tau)
{
    if (k < 1 || k > dp.n())
        throw DomainError("step index out of range [1, n]");
    StationaryInfo st(dp.a(), dp.b(), iota);
    double g = std::pow(dp.gamma(), static_cast<double>(k - 1));
    return st.pi(tau) * (1.0 - st.eps(tau) * g);
}

/// P(Y(t) = tau) for the continuous-time chain.
inline double state_prob_continuous(double t,
                                    const KineticParams& p,
                                    const InitialDistribution& iota,
                                    Phase tau)
{
    if (!(t >= 0))
        throw DomainError("time must be nonnegative");
    if (t == 0)
        return iota[tau];
    StationaryInfo st(p, iota);
    return st.pi(tau) * (1.0 - st.eps(tau) * st.A(t));
}

/// Smallest n with max(lambda, mu) t / n <= cap.
inline std::size_t
choose_n(double t, const KineticParams& p, double cap = 0.01)
{
    if (!(cap > 0 && cap < 1))
        throw ParameterError("cap must lie in (0, 1)");
    if (!(t > 0))
        throw ParameterError("time horizon must be positive");
    double rate = std::max(p.lambda(), p.mu());
    auto ok = [&](double n) { return rate * t / n <= cap; };
    double n = std::max(1.0, std::ceil(rate * t / cap));
    while (n > 1 && ok(n - 1))
        n -= 1;
    while (!ok(n))
        n += 1;
    return static_cast<std::size_t>(n);
}

}  // namespace kinetic
