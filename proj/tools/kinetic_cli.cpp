// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// kinetic: command-line front end. Every subcommand writes CSV to --out (or
// stdout). Exit codes: 0 ok, 2 parameter error, 3 accuracy error, 4
// resource error.

#include <cstdint>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinetic/kinetic.hpp"

using namespace kinetic;

namespace {

struct Globals {
    std::string params_file;
    std::string out;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    unsigned threads = 0;
    // overrides of parameter-file keys
    std::map<std::string, double> set;
};

class Output {
  public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw ParameterError("cannot write '" + path + "'");
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

ResolvedParameters model(const Globals& g)
{
    ParameterSet ps;
    if (!g.params_file.empty())
        ps = load_parameters(g.params_file);
    for (const auto& [k, v] : g.set)
        ps.set(k, v);
    return resolve(ps);
}

std::size_t steps(const ResolvedParameters& m, double cap)
{
    return m.n ? *m.n : choose_n(m.t, m.params, cap);
}

void add_model_flags(CLI::App& app, Globals& g)
{
    for (const char* k : {"lambda", "mu", "D", "v", "t", "iota_F", "n", "Pe", "Da_I", "t_star", "R", "L"}) {
        const std::string key = k;
        app.add_option_function<double>(
               "--" + key, [&g, key](double v) { g.set[key] = v; },
               "override parameter-file key " + key)
            ->group("Model");
    }
}

void add_scan_flags(CLI::App* sub, ScanConfig& sc)
{
    sub->add_option("--prominence", sc.prominence_rel, "relative peak prominence")->capture_default_str();
    sub->add_flag("--inject", sc.inject, "smear the pulse over [0, L] before counting peaks");
    sub->add_option("--nx", sc.nx, "profile nodes")->capture_default_str();
    sub->add_option("--steps", sc.n, "chain steps n")->capture_default_str();
    sub->add_option("--floor", sc.floor)->capture_default_str();
    sub->add_option("--ceiling", sc.ceiling)->capture_default_str();
    sub->add_option("--step", sc.step)->capture_default_str();
    sub->add_option("--refine", sc.refine, "probe spacing past the last pass, 0 = off")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stochastic kinetic transport: occupation-time laws, densities, moments, "
                 "simulation, PDE oracle and Damkohler scans"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--params", g.params_file, "parameter file (key = value lines)");
    app.add_option("--out", g.out, "output CSV path (default stdout)");
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--tolerance", g.tolerance, "absolute error budget for densities")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads, 0 = auto");
    add_model_flags(app, g);

    // mbd
    auto* mbd = app.add_subcommand("mbd", "pmf of the free-step count K_n");
    std::string mbd_phase = "total";
    bool mbd_conditional = false, mbd_brute = false;
    double cap = 0.01;
    mbd->add_option("--phase", mbd_phase, "total, free or adsorbed")->capture_default_str();
    mbd->add_flag("--conditional", mbd_conditional, "condition on the terminal phase");
    mbd->add_flag("--bruteforce", mbd_brute, "enumerate all paths (n <= 20)");
    mbd->add_option("--cap", cap, "max(a, b) cap when n is chosen automatically")->capture_default_str();

    // cf
    auto* cfc = app.add_subcommand("cf", "characteristic function on a u grid");
    std::string cf_phase = "total";
    double u_min = -20, u_max = 20;
    std::size_t u_count = 401;
    bool cf_discrete_too = false;
    cfc->add_option("--phase", cf_phase)->capture_default_str();
    cfc->add_option("--u-min", u_min)->capture_default_str();
    cfc->add_option("--u-max", u_max)->capture_default_str();
    cfc->add_option("--u-count", u_count)->capture_default_str();
    cfc->add_flag("--discrete", cf_discrete_too, "add the n-step characteristic function");
    cfc->add_option("--cap", cap)->capture_default_str();

    // density
    auto* den = app.add_subcommand("density", "density of S(t) by Fourier inversion");
    std::string den_phase = "total";
    std::size_t den_nodes = 4001;
    std::optional<double> den_lo, den_hi;
    double mollifier = 0;
    den->add_option("--phase", den_phase)->capture_default_str();
    den->add_option("--nodes", den_nodes)->capture_default_str();
    den->add_option("--lo", den_lo);
    den->add_option("--hi", den_hi);
    den->add_option("--mollifier", mollifier, "sd of a Gaussian smoothing kernel")->capture_default_str();

    // moments
    auto* mom = app.add_subcommand("moments", "means and variances");
    bool compare_michalak = false;
    mom->add_flag("--compare-michalak", compare_michalak,
                  "compare the free variance with the single-rate formula (iota_F = 1)");
    mom->add_option("--cap", cap)->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo particle tracking");
    std::string sim_model = "ctmc";
    std::size_t N = 100000;
    double Lambda = 0;
    bool summary_only = false;
    sim->add_option("--model", sim_model, "discrete, ctmc or uniformized")->capture_default_str();
    sim->add_option("-N,--particles", N)->capture_default_str();
    sim->add_option("--Lambda", Lambda, "uniformization rate (default lambda + mu)");
    sim->add_flag("--summary", summary_only, "per-phase summary instead of samples");
    sim->add_option("--cap", cap)->capture_default_str();

    // pde
    auto* pde = app.add_subcommand("pde", "finite-difference solve of the transport system");
    std::size_t pde_nodes = 2001;
    std::optional<double> pde_lo, pde_hi;
    double pde_dt = 1e-3, init_width = 0;
    std::vector<double> snaps;
    bool allow_peclet = false;
    pde->add_option("--nodes", pde_nodes)->capture_default_str();
    pde->add_option("--lo", pde_lo);
    pde->add_option("--hi", pde_hi);
    pde->add_option("--dt", pde_dt)->capture_default_str();
    pde->add_option("--init-width", init_width, "sd of the initial Gaussian, 0 = default");
    pde->add_option("--snapshot", snaps, "output times (default: end time)");
    pde->add_flag("--allow-high-peclet", allow_peclet);

    // table1, scan, figure3
    ScanConfig sc;
    auto* tab = app.add_subcommand("table1", "largest Da_I with a double peak, per t_star");
    add_scan_flags(tab, sc);
    auto* scan = app.add_subcommand("scan", "Damkohler scan at one t_star");
    double scan_t_star = 0;
    scan->add_option("--at", scan_t_star, "t_star of the scan")->required();
    add_scan_flags(scan, sc);
    auto* fig = app.add_subcommand("figure3", "normalized injected free profile");
    int panel_index = -1;
    double fig_Da = 0, fig_ts = 0;
    fig->add_option("--panel", panel_index, "built-in panel 0, 1 or 2");
    fig->add_option("--Da", fig_Da, "custom Damkohler number");
    fig->add_option("--at", fig_ts, "custom t_star");
    fig->add_option("--nx", sc.nx)->capture_default_str();
    fig->add_option("--steps", sc.n)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        Output out(g.out);
        std::ostream& os = out.os();

        if (mbd->parsed()) {
            const auto m = model(g);
            const DiscreteParams dp(steps(m, cap), m.t, m.params);
            const PhaseSelector sel = parse_phase(mbd_phase);
            Pmf p;
            if (sel == PhaseSelector::total) {
                p = mbd_brute ? pmf_bruteforce(dp, m.iota) : pmf(dp, m.iota);
            } else {
                const Phase tau = sel == PhaseSelector::free ? Phase::free : Phase::adsorbed;
                if (mbd_conditional) {
                    p = conditional_pmf(dp, m.iota, tau);
                } else {
                    PartialPmf pp = mbd_brute ? partial_pmf_bruteforce(dp, m.iota, tau)
                                              : partial_pmf(dp, m.iota, tau);
                    p = Pmf{pp.n, std::move(pp.values)};
                }
            }
            write_csv(os, p);
        } else if (cfc->parsed()) {
            const auto m = model(g);
            const PhaseSelector sel = parse_phase(cf_phase);
            if (u_count < 2)
                throw ParameterError("u-count must be at least 2");
            std::optional<DiscreteParams> dp;
            if (cf_discrete_too)
                dp.emplace(steps(m, cap), m.t, m.params);
            CsvWriter w(os);
            w.meta("t", m.t).meta("phase", to_string(sel));
            if (dp)
                w.meta("n", static_cast<double>(dp->n()));
            std::vector<std::string> head{"u", "re", "im"};
            if (dp) {
                head.push_back("re_discrete");
                head.push_back("im_discrete");
            }
            w.header(head);
            for (std::size_t i = 0; i < u_count; ++i) {
                const double u = u_min + (u_max - u_min) * static_cast<double>(i)
                                             / static_cast<double>(u_count - 1);
                const cplx c = cf(m.t, u, m.iota, sel, m.params);
                std::vector<std::string> row{format_real(u), format_real(c.real()), format_real(c.imag())};
                if (dp) {
                    const cplx cd = cf_discrete(*dp, u, m.iota, sel, m.params);
                    row.push_back(format_real(cd.real()));
                    row.push_back(format_real(cd.imag()));
                }
                w.row(row);
            }
        } else if (den->parsed()) {
            const auto m = model(g);
            const PhaseSelector sel = parse_phase(den_phase);
            Grid grid = auto_grid(m.t, m.iota, sel, m.params, den_nodes);
            if (den_lo || den_hi)
                grid = Grid(den_lo.value_or(grid.lo), den_hi.value_or(grid.hi), den_nodes);
            QuadratureConfig q;
            q.tolerance = g.tolerance;
            q.mollifier = mollifier;
            q.workers = g.threads;
            const DensityGrid d = invert_cf(m.t, grid, m.iota, sel, m.params, q);
            if (sel == PhaseSelector::total) {
                std::optional<PartialDensityGrid> pf, pa;
                if (state_prob_continuous(m.t, m.params, m.iota, Phase::free) > 0)
                    pf = partial_density(m.t, grid, m.iota, Phase::free, m.params, q);
                if (state_prob_continuous(m.t, m.params, m.iota, Phase::adsorbed) > 0)
                    pa = partial_density(m.t, grid, m.iota, Phase::adsorbed, m.params, q);
                write_csv(os, d, pf ? &*pf : nullptr, pa ? &*pa : nullptr);
            } else {
                write_csv(os, d);
            }
        } else if (mom->parsed()) {
            const auto m = model(g);
            CsvWriter w(os);
            if (compare_michalak) {
                if (m.iota.iota_F() != 1.0)
                    throw ParameterError("the single-rate comparison needs iota_F = 1");
                const double beta = m.params.lambda() / m.params.mu(), k = m.params.mu();
                const double ref = michalak_mu2star(m.t, beta, k, m.params.D(), m.params.v());
                const double ours = moments_limit(m.t, m.iota, PhaseSelector::free, m.params).variance;
                w.header({"beta", "k", "t", "single_rate_variance", "variance", "relative_difference"});
                w.row({beta, k, m.t, ref, ours, std::abs(ref - ours) / std::abs(ref)});
            } else {
                std::optional<DiscreteParams> dp;
                if (m.n)
                    dp.emplace(*m.n, m.t, m.params);
                w.meta("t", m.t);
                if (dp)
                    w.meta("n", static_cast<double>(dp->n()));
                std::vector<std::string> head{"phase", "mean", "variance"};
                if (dp) {
                    head.push_back("mean_discrete");
                    head.push_back("variance_discrete");
                }
                w.header(head);
                for (PhaseSelector sel : {PhaseSelector::total, PhaseSelector::free, PhaseSelector::adsorbed}) {
                    if (sel != PhaseSelector::total) {
                        const Phase tau = sel == PhaseSelector::free ? Phase::free : Phase::adsorbed;
                        if (!(state_prob_continuous(m.t, m.params, m.iota, tau) > 0))
                            continue;
                    }
                    const MomentSummary ms = moments_limit(m.t, m.iota, sel, m.params);
                    std::vector<std::string> row{to_string(sel), format_real(ms.mean), format_real(ms.variance)};
                    if (dp) {
                        const MomentSummary md = moments_discrete(*dp, m.iota, sel, m.params);
                        row.push_back(format_real(md.mean));
                        row.push_back(format_real(md.variance));
                    }
                    w.row(row);
                }
            }
        } else if (sim->parsed()) {
            const auto m = model(g);
            SampleSet s;
            if (sim_model == "discrete") {
                s = simulate_discrete(DiscreteParams(steps(m, cap), m.t, m.params), m.iota, m.params, N, g.seed,
                                      g.threads);
            } else if (sim_model == "ctmc") {
                s = simulate_ctmc(m.t, m.iota, m.params, N, g.seed, g.threads);
            } else if (sim_model == "uniformized") {
                const double rate = Lambda > 0 ? Lambda : m.params.total_rate();
                s = simulate_uniformized(m.t, rate, m.iota, m.params, N, g.seed, g.threads);
            } else {
                throw ParameterError("unknown model '" + sim_model + "'");
            }
            if (summary_only) {
                CsvWriter w(os);
                w.meta("model", to_string(s.model)).meta("t", s.t).meta("seed", std::to_string(s.seed));
                w.header({"phase", "count", "mean", "variance", "se_mean", "se_variance"});
                for (PhaseSelector sel : {PhaseSelector::total, PhaseSelector::free, PhaseSelector::adsorbed}) {
                    const auto x = filter_positions(s, sel);
                    if (x.empty())
                        continue;
                    const SampleStats st = sample_stats(x);
                    w.row({to_string(sel), std::to_string(st.count), format_real(st.mean),
                           format_real(st.variance), format_real(st.se_mean), format_real(st.se_variance)});
                }
            } else {
                write_csv(os, s);
            }
        } else if (pde->parsed()) {
            const auto m = model(g);
            const auto [slo, shi] = position_support(m.t, m.params, 12);
            const Grid grid(pde_lo.value_or(slo), pde_hi.value_or(shi), pde_nodes);
            PdeOptions o;
            o.snapshots = snaps;
            o.allow_high_peclet = allow_peclet;
            const FieldPair f = solve(m.params, m.iota, init_width, grid, m.t, pde_dt, o);
            for (const auto& wmsg : f.warnings)
                std::cerr << "warning: " << wmsg << '\n';
            write_csv(os, f);
        } else if (tab->parsed()) {
            sc.workers = g.threads;
            write_table_csv(os, table1(sc));
        } else if (scan->parsed()) {
            sc.workers = g.threads;
            const ScanResult r = damkohler_scan(scan_t_star, sc);
            if (r.non_monotone)
                std::cerr << "warning: two peaks reappear above Da_I_max\n";
            CsvWriter w(os);
            w.meta("t_star", r.t_star).meta("Da_I_max", r.found ? r.Da_I_max : std::nan(""));
            w.meta("non_monotone", r.non_monotone ? "1" : "0");
            w.header({"Da_I", "peaks"});
            for (const auto& [d, c] : r.evaluations)
                w.row({format_real(d), std::to_string(c)});
        } else if (fig->parsed()) {
            sc.workers = g.threads;
            ProfilePanel panel{fig_Da, fig_ts};
            if (panel_index >= 0) {
                if (panel_index >= static_cast<int>(figure3_panels.size()))
                    throw ParameterError("panel index must be 0, 1 or 2");
                panel = figure3_panels[static_cast<std::size_t>(panel_index)];
            } else if (!(fig_Da > 0) || !(fig_ts > 0)) {
                throw ParameterError("give --panel or both --Da and --at");
            }
            write_csv(os, figure3(panel, sc), panel);
        }
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what();
        if (e.suggestion() != 0)
            std::cerr << " (suggested value " << e.suggestion() << ')';
        std::cerr << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 4;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource error: out of memory\n";
        return 4;
    }
    return 0;
}
