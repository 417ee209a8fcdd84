// SPDX-License-Identifier: Apache-2.0
// sagin: BER curves, orbit and relativity reports, distribution checks and Doppler profiles as CSV.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sagin/errors.hpp"
#include "sagin/experiments.hpp"

using namespace sagin::cli;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::string out;
};

std::string quote(std::string_view s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
}

ScenarioConfig resolve(const Common& c) {
    ScenarioConfig cfg = c.config.empty() ? parse_scenario("", "<defaults>") : load_scenario(c.config);
    if (c.seed) {
        cfg.seed = *c.seed;
    } else if (const char* env = std::getenv("SAGIN_SEED"); env && *env) {
        const std::string_view v(env);
        std::uint64_t s = 0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), s);
        if (r.ec != std::errc() || r.ptr != v.data() + v.size())
            throw sagin::ConfigError(fmt::format("SAGIN_SEED: expected an unsigned integer, got '{}'", v));
        cfg.seed = s;
    }
    if (c.trials) cfg.trials = *c.trials;
    validate(cfg);
    return cfg;
}

void emit(const Common& c, std::string_view command, const ScenarioConfig& cfg, const CsvTable& table,
          const std::string& summary) {
    if (c.out.empty()) {
        write_csv(std::cout, command, cfg, table);
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw sagin::ConfigError(fmt::format("--out: cannot open '{}'", c.out));
    write_csv(f, command, cfg, table);
    if (!f.flush()) throw sagin::ConfigError(fmt::format("--out: write failed for '{}'", c.out));
    std::cout << summary;
}

void add_common(CLI::App* sub, Common& c, bool trials) {
    sub->add_option("--config", c.config, "Scenario file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "Random seed (overrides SAGIN_SEED and the config)");
    if (trials) sub->add_option("--trials", c.trials, "Monte Carlo trials or samples");
    sub->add_option("--out", c.out, "CSV output path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEO-satellite 16-QAM BER toolkit"};
    app.require_subcommand(1);
    Common common;

    auto* ber = app.add_subcommand("ber-curve", "Analytic and Monte Carlo BER over a sweep");
    add_common(ber, common, true);
    std::string sweep = "snr";
    std::optional<double> from, to;
    std::optional<int> steps;
    bool no_mc = false;
    ber->add_option("--sweep", sweep, "snr (dB) | tau (s) | fmax (Hz) | elevation (deg)");
    ber->add_option("--from", from, "First sweep value");
    ber->add_option("--to", to, "Last sweep value");
    ber->add_option("--steps", steps, "Number of sweep points");
    ber->add_flag("--no-mc", no_mc, "Skip the Monte Carlo column");

    auto* orb = app.add_subcommand("orbit", "Orbit geometry and period difference");
    add_common(orb, common, false);

    auto* rel = app.add_subcommand("relativity", "Special and general relativistic clock offsets");
    add_common(rel, common, false);

    auto* dist = app.add_subcommand("dist-validate", "Sampled channel vs fitted marginal and bivariate Gamma law");
    add_common(dist, common, true);

    auto* dop = app.add_subcommand("doppler-profile", "LoS Doppler over a pass");
    add_common(dop, common, false);
    dop->add_option("--from", from, "Start time, s (0 = closest approach)");
    dop->add_option("--to", to, "End time, s");
    dop->add_option("--steps", steps, "Number of samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error kind=usage message=" << quote(e.what()) << '\n';
        return 2;
    }

    try {
        const ScenarioConfig cfg = resolve(common);
        if (ber->parsed()) {
            BerCurveOptions opt;
            opt.sweep = parse_sweep(sweep);
            switch (opt.sweep) {
                case Sweep::snr: opt.from = 0.0, opt.to = 17.0, opt.steps = 18; break;
                case Sweep::tau: opt.from = 0.4e-3, opt.to = 3.1e-3, opt.steps = 10; break;
                case Sweep::fmax: opt.from = 100.0, opt.to = 1600.0, opt.steps = 16; break;
                case Sweep::elevation: opt.from = 20.0, opt.to = 80.0, opt.steps = 3; break;
            }
            if (from) opt.from = *from;
            if (to) opt.to = *to;
            if (steps) opt.steps = *steps;
            opt.monte_carlo = !no_mc;
            const auto pts = run_ber_curve(cfg, opt);
            std::ostringstream s;
            s << fmt::format("{:>14} {:>10} {:>14} {:>14} {:>12}\n", "sweep_value", "eta", "ber_analytic", "ber_mc", "ci_half");
            for (const auto& p : pts)
                s << fmt::format("{:>14.6g} {:>10.6f} {:>14.6e} {:>14} {:>12}\n", p.sweep_value, p.eta, p.ber_analytic,
                                 p.ber_mc ? fmt::format("{:.6e}", *p.ber_mc) : "-",
                                 p.ber_mc ? fmt::format("{:.3e}", p.ci_halfwidth) : "-");
            emit(common, "ber-curve", cfg, ber_curve_table(pts, opt), s.str());
        } else if (orb->parsed()) {
            const auto rows = run_orbit_report(cfg);
            std::ostringstream s;
            for (const auto& r : rows)
                s << fmt::format("{:<12} a={:.6f} m  e={:.6g}  T={:.6f} s  dT_o={:.6f} s\n", r.label, r.el.a, r.el.e, r.el.T,
                                 r.delta_T);
            emit(common, "orbit", cfg, orbit_table(rows), s.str());
        } else if (rel->parsed()) {
            const auto r = run_relativity_report(cfg);
            const auto s = fmt::format("special_offset={:.6e} s  general_offset={:.6e} s  sub_microsecond={}\n",
                                       r.special, r.general, r.sub_microsecond);
            emit(common, "relativity", cfg, relativity_table(r), s);
        } else if (dist->parsed()) {
            const std::uint64_t n = common.trials ? *common.trials : 1000000;
            const auto d = run_dist_validate(cfg, n);
            const auto s = fmt::format("n={}  ks_gamma={:.5f}  ks_sr={:.5f}  power_corr={:.6f}  rho_sr={:.6f}  "
                                       "chi2={:.2f}  dof={}  p={:.3g}\n",
                                       d.n, d.ks_gamma, d.ks_shadowed_rician, d.power_correlation, d.rho_sr, d.chi2,
                                       d.dof, d.p_value);
            emit(common, "dist-validate", cfg, dist_table(d), s);
        } else if (dop->parsed()) {
            const double half = 0.5 * cfg.rel_window;
            const auto prof = run_doppler_profile(cfg, from.value_or(-half), to.value_or(half), steps.value_or(101));
            std::ostringstream s;
            s << fmt::format("{} samples, f_los_circular from {:.1f} Hz to {:.1f} Hz\n", prof.size(),
                             prof.front().f_circular, prof.back().f_circular);
            emit(common, "doppler-profile", cfg, doppler_table(prof), s.str());
        }
    } catch (const sagin::ConfigError& e) {
        std::cerr << "error kind=config message=" << quote(e.what()) << '\n';
        return 2;
    } catch (const sagin::DomainError& e) {
        std::cerr << "error kind=domain message=" << quote(e.what()) << '\n';
        return 3;
    } catch (const sagin::NumericError& e) {
        std::cerr << "error kind=numeric message=" << quote(e.what()) << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error kind=internal message=" << quote(e.what()) << '\n';
        return 5;
    }
    return 0;
}
