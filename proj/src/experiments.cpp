// SPDX-License-Identifier: Apache-2.0
#include "sagin/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "sagin/errors.hpp"
#include "sagin/random.hpp"
#include "sagin/relativity.hpp"

namespace sagin::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) { return format_number(v); }

unsigned worker_count(unsigned threads) {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(begin, end) over [0, n) in fixed chunks; results must be written by index.
template <class F>
void parallel_chunks(std::uint64_t n, unsigned threads, F body) {
    constexpr std::uint64_t kChunk = 16384;
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) body(c * kChunk, std::min(n, (c + 1) * kChunk));
    };
    const unsigned w = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(threads), std::max<std::uint64_t>(chunks, 1)));
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < w; ++i) pool.emplace_back(work);
    work();
}

double ks_distance(std::vector<double> xs, const auto& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

}  // namespace

std::string csv_escape(std::string_view cell) {
    if (cell.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(std::ostream& os, std::string_view command, const ScenarioConfig& cfg, const CsvTable& table) {
    os << "# command = " << command << '\n';
    for (const auto& [k, v] : describe(cfg)) os << "# " << k << " = " << v << '\n';
    for (const auto& [k, v] : table.meta) os << "# " << k << " = " << v << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
        os << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
}

OperatingPoint operating_point(const ScenarioConfig& cfg) {
    OperatingPoint op;
    const auto params = cfg.channel_params();
    op.tau_e = cfg.tau_e();
    op.correlation = channel::correlation_profile(op.tau_e, {cfg.f_max}, params, cfg.variance_convention);
    op.fit = channel::fit_marginal_gamma(params, cfg.gamma_fit);
    op.shape = channel::make_shape(op.fit, op.correlation.rho_sr);
    const auto budget = propagation::received_power_gain(cfg.link_geometry(), cfg.absorption_spec(),
                                                         propagation::dbw_to_watts(cfg.P_s_dBW),
                                                         propagation::dbm_to_watts(cfg.noise_dBm));
    op.a_p = budget.a_p;
    op.mean_snr = budget.mean_snr;
    return op;
}

Sweep parse_sweep(std::string_view name) {
    if (name == "snr") return Sweep::snr;
    if (name == "tau") return Sweep::tau;
    if (name == "fmax") return Sweep::fmax;
    if (name == "elevation") return Sweep::elevation;
    throw ConfigError(fmt::format("--sweep: expected snr|tau|fmax|elevation, got '{}'", name));
}

std::string_view sweep_name(Sweep s) {
    switch (s) {
        case Sweep::snr: return "snr";
        case Sweep::tau: return "tau";
        case Sweep::fmax: return "fmax";
        case Sweep::elevation: return "elevation";
    }
    return "snr";
}

std::vector<double> sweep_values(double from, double to, int steps) {
    if (steps < 1) throw ConfigError("--steps: must be >= 1");
    if (!std::isfinite(from) || !std::isfinite(to)) throw ConfigError("--from/--to: must be finite");
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) v[i] = steps == 1 ? from : from + (to - from) * i / (steps - 1);
    return v;
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) {
    return philox4x64({index, 0x6265722d63757276ULL, 0, 0}, {seed, 0x706f696e74ULL})[0];
}

std::vector<BerPoint> run_ber_curve(const ScenarioConfig& cfg, const BerCurveOptions& opt) {
    const auto values = sweep_values(opt.from, opt.to, opt.steps);
    const ber::SeriesControl ctl{1e-12, cfg.k_max};
    std::vector<BerPoint> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioConfig c = cfg;
        const double v = values[i];
        switch (opt.sweep) {
            case Sweep::snr: break;
            case Sweep::tau:
                c.tau = v;
                c.tau_s = 0.0;
                break;
            case Sweep::fmax: c.f_max = v; break;
            case Sweep::elevation: c.theta0 = v * specfun::kPi / 180.0; break;
        }
        validate(c);
        const auto op = operating_point(c);
        const double snr = opt.sweep == Sweep::snr ? std::pow(10.0, v / 10.0) : op.mean_snr;
        const auto link = ber::QamLink::from_snr(snr);
        BerPoint p;
        p.sweep_value = v;
        p.snr_db = opt.sweep == Sweep::snr ? v : 10.0 * std::log10(snr);
        p.rho_j = op.correlation.rho_j;
        p.rho_sr = op.correlation.rho_sr;
        p.eta = op.shape.eta;
        p.ber_analytic = ber::average_ber_closed_form(link, op.shape, c.Q, ctl);
        if (opt.monte_carlo) {
            const auto mc = ber::monte_carlo_ber(c.channel_params(), p.rho_j, link, c.trials, point_seed(c.seed, i),
                                                 c.mc_mode, opt.threads);
            p.ber_mc = mc.ber;
            p.ci_halfwidth = mc.halfwidth;
            p.n_trials = mc.n_trials;
        }
        out.push_back(p);
    }
    return out;
}

CsvTable ber_curve_table(const std::vector<BerPoint>& points, const BerCurveOptions& opt) {
    CsvTable t;
    t.header = {"sweep_value", "rho_j", "rho_sr", "eta", "ber_analytic", "ber_mc", "ci_halfwidth", "n_trials", "snr_db"};
    t.meta = {{"sweep", std::string(sweep_name(opt.sweep))},
              {"from", num(opt.from)},
              {"to", num(opt.to)},
              {"steps", std::to_string(opt.steps)},
              {"monte_carlo", opt.monte_carlo ? "true" : "false"}};
    for (const auto& p : points)
        t.rows.push_back({num(p.sweep_value), num(p.rho_j), num(p.rho_sr), num(p.eta), num(p.ber_analytic),
                          p.ber_mc ? num(*p.ber_mc) : "", p.ber_mc ? num(p.ci_halfwidth) : "",
                          std::to_string(p.n_trials), num(p.snr_db)});
    return t;
}

std::vector<OrbitRow> run_orbit_report(const ScenarioConfig& cfg) {
    const auto body = cfg.body();
    auto row = [&](std::string label, const orbit::OrbitElements& el) {
        OrbitRow r;
        r.label = std::move(label);
        r.el = el;
        r.circumference = orbit::circumference(el);
        r.v_p = orbit::vis_viva_speed(el, el.r_p);
        r.v_a = orbit::vis_viva_speed(el, el.r_a);
        r.delta_T = orbit::period_difference(el.r_p - body.R, el.e, body);
        return r;
    };
    std::vector<OrbitRow> rows;
    const double r_p = body.R + cfg.H_p;
    for (double e : {1e-4, 1e-3}) rows.push_back(row(fmt::format("e={}", num(e)), orbit::elements_from_axis(r_p / (1.0 - e), e, body.mu())));
    rows.push_back(row("configured", cfg.orbit_elements()));
    return rows;
}

CsvTable orbit_table(const std::vector<OrbitRow>& rows) {
    CsvTable t;
    t.header = {"orbit", "a", "e", "b", "p", "T", "C", "v_p", "v_a", "dT_o"};
    for (const auto& r : rows)
        t.rows.push_back({r.label, num(r.el.a), num(r.el.e), num(r.el.b), num(r.el.p), num(r.el.T), num(r.circumference),
                          num(r.v_p), num(r.v_a), num(r.delta_T)});
    return t;
}

RelativityReport run_relativity_report(const ScenarioConfig& cfg) {
    RelativityReport rep;
    rep.window = cfg.rel_window;
    rep.v = cfg.rel_v;
    rep.special = relativity::special_offset(cfg.rel_window, cfg.rel_v);
    rep.theta_pol_from_orbit = !cfg.rel_theta_pol.has_value();
    const auto el = cfg.orbit_elements();
    const auto orient = cfg.orientation();
    const auto n = static_cast<std::size_t>(std::ceil(cfg.rel_window / cfg.rel_dt - 1e-9));
    std::vector<relativity::PathSample> path;
    path.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = std::min(cfg.rel_window, static_cast<double>(i) * cfg.rel_dt);
        const auto s = orbit::propagate(el, t, orient);
        const double r = s.r.norm();
        const double th = cfg.rel_theta_pol ? *cfg.rel_theta_pol : std::acos(std::clamp(s.r.z() / r, -1.0, 1.0));
        path.push_back({t, r, th, cfg.rel_v});
    }
    rep.samples = path.size();
    rep.general = relativity::accumulated_offset(path);
    rep.sub_microsecond = std::abs(rep.general) < 1e-6;
    return rep;
}

CsvTable relativity_table(const RelativityReport& r) {
    CsvTable t;
    t.header = {"quantity", "value", "unit"};
    t.meta = {{"path", fmt::format("two-body orbit from perigee, {} samples over the window, speed held at v, "
                                   "theta_pol {}",
                                   r.samples, r.theta_pol_from_orbit ? "from the orbit position" : "fixed")}};
    t.rows = {{"window", num(r.window), "s"},
              {"v", num(r.v), "m/s"},
              {"special_offset", num(r.special), "s"},
              {"general_offset", num(r.general), "s"},
              {"sub_microsecond", r.sub_microsecond ? "true" : "false", ""}};
    return t;
}

DistValidation run_dist_validate(const ScenarioConfig& cfg, std::uint64_t n_samples, int bins, unsigned threads) {
    if (n_samples < 100000) throw ConfigError("dist-validate: at least 1e5 samples are required");
    if (bins < 2) throw ConfigError("dist-validate: bins must be >= 2");
    const auto params = cfg.channel_params();
    const auto op = operating_point(cfg);
    const double rho_j = op.correlation.rho_j;
    std::vector<double> a(n_samples), ah(n_samples);
    parallel_chunks(n_samples, threads, [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i) {
            RandomStream rng(cfg.seed, i);
            const auto pr = channel::sample_correlated_pair(params, rho_j, rng);
            a[i] = std::abs(pr.data);
            ah[i] = std::abs(pr.pilot);
        }
    });

    DistValidation d;
    d.n = n_samples;
    d.rho_j = rho_j;
    d.rho_sr = op.correlation.rho_sr;
    d.ks_gamma = ks_distance(a, [&](double r) { return channel::gamma_envelope_cdf(r, op.fit); });
    d.ks_shadowed_rician = ks_distance(a, [&](double r) { return channel::power_cdf(r * r, params); });

    double m1 = 0, m2 = 0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        m1 += a[i] * a[i];
        m2 += ah[i] * ah[i];
    }
    const double n = static_cast<double>(n_samples);
    m1 /= n;
    m2 /= n;
    double c12 = 0, v1 = 0, v2 = 0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const double x = a[i] * a[i] - m1, y = ah[i] * ah[i] - m2;
        c12 += x * y;
        v1 += x * x;
        v2 += y * y;
    }
    d.power_correlation = c12 / std::sqrt(v1 * v2);

    // edges in t = rate * |h|^2
    std::vector<double> edges(bins + 1);
    edges[0] = 0.0;
    edges[bins] = kInf;
    for (int k = 1; k < bins; ++k) edges[k] = boost::math::gamma_p_inv(op.fit.shape, static_cast<double>(k) / bins);
    auto bin_of = [&](double env) {
        const double t = op.fit.rate * env * env;
        const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, t);
        return static_cast<int>(it - edges.begin()) - 1;
    };
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins * bins), 0), marg(bins, 0);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const int bi = bin_of(a[i]);
        ++counts[bi * bins + bin_of(ah[i])];
        ++marg[bi];
    }
    const auto F = channel::bivariate_gamma_cdf_grid(edges, edges, op.shape);
    auto env_edge = [&](int k) { return std::sqrt(edges[k] / op.fit.rate); };

    std::vector<ChiSquareCell> cells;
    for (int i = 0; i < bins; ++i)
        for (int j = 0; j < bins; ++j) {
            const double p = F[i + 1][j + 1] - F[i][j + 1] - F[i + 1][j] + F[i][j];
            cells.push_back({"joint", i, j, env_edge(i), env_edge(i + 1), env_edge(j), env_edge(j + 1),
                             counts[i * bins + j], n * std::max(p, 0.0)});
        }
    ChiSquareCell pooled{"pooled", -1, -1, 0, 0, 0, 0, 0, 0.0};
    std::vector<ChiSquareCell*> kept;
    for (auto& c : cells) {
        if (c.expected < 5.0) {
            pooled.observed += c.observed;
            pooled.expected += c.expected;
        } else {
            kept.push_back(&c);
        }
    }
    if (pooled.expected > 0.0 && pooled.expected < 5.0 && !kept.empty()) {
        auto smallest = std::min_element(kept.begin(), kept.end(),
                                         [](const auto* x, const auto* y) { return x->expected < y->expected; });
        pooled.observed += (*smallest)->observed;
        pooled.expected += (*smallest)->expected;
        (*smallest)->kind = "merged";
        kept.erase(smallest);
    }
    double chi2 = 0.0;
    for (const auto* c : kept) chi2 += (c->observed - c->expected) * (c->observed - c->expected) / c->expected;
    int groups = static_cast<int>(kept.size());
    if (pooled.expected > 0.0) {
        chi2 += (pooled.observed - pooled.expected) * (pooled.observed - pooled.expected) / pooled.expected;
        ++groups;
    }
    d.chi2 = chi2;
    d.dof = groups - 1;
    d.p_value = d.dof > 0 ? boost::math::gamma_q(0.5 * d.dof, 0.5 * chi2) : 1.0;
    for (auto& c : cells)
        if (c.expected < 5.0) c.kind = "pooled";
    d.cells = std::move(cells);
    if (pooled.expected > 0.0) d.cells.push_back(pooled);
    for (int i = 0; i < bins; ++i)
        d.cells.push_back({"marginal", i, -1, env_edge(i), env_edge(i + 1), 0, kInf, marg[i], n / bins});
    return d;
}

CsvTable dist_table(const DistValidation& d) {
    CsvTable t;
    t.header = {"kind", "i", "j", "x_lo", "x_hi", "y_lo", "y_hi", "observed", "expected"};
    t.meta = {{"samples", std::to_string(d.n)},
              {"rho_j", num(d.rho_j)},
              {"ks_gamma_envelope", num(d.ks_gamma)},
              {"ks_shadowed_rician", num(d.ks_shadowed_rician)},
              {"power_correlation", num(d.power_correlation)},
              {"rho_sr", num(d.rho_sr)},
              {"chi2", num(d.chi2)},
              {"chi2_dof", std::to_string(d.dof)},
              {"chi2_p_value", num(d.p_value)}};
    for (const auto& c : d.cells) {
        const bool summary = c.i < 0;
        t.rows.push_back({c.kind, summary ? "" : std::to_string(c.i), c.j < 0 ? "" : std::to_string(c.j),
                          summary ? "" : num(c.x_lo), summary ? "" : num(c.x_hi), summary ? "" : num(c.y_lo),
                          summary ? "" : num(c.y_hi), std::to_string(c.observed), num(c.expected)});
    }
    return t;
}

std::vector<DopplerSample> run_doppler_profile(const ScenarioConfig& cfg, double from, double to, int steps) {
    const auto body = cfg.body();
    const auto el = cfg.orbit_elements();
    doppler::PassGeometry g;
    g.theta_max = cfg.theta0;
    g.H_os = body.R + cfg.H_p;
    g.R = body.R;
    g.f_c = cfg.f_c;
    g.omega_rel = doppler::default_relative_angular_velocity(g.H_os, body.mu(), cfg.inclination);
    const double beta = doppler::cross_track_angle(g);
    const double we = doppler::kEarthRotationRate * std::cos(cfg.inclination);
    std::vector<DopplerSample> out;
    for (double t : sweep_values(from, to, steps)) {
        DopplerSample s;
        s.t = t;
        s.f_circular = doppler::los_doppler_circular(t, g);
        const auto st = orbit::propagate(el, t);
        const orbit::Vec3 ru = body.R * orbit::Vec3(std::cos(beta) * std::cos(we * t), std::cos(beta) * std::sin(we * t),
                                                    std::sin(beta));
        const orbit::Vec3 vu = we * orbit::Vec3(-ru.y(), ru.x(), 0.0);
        s.f_elliptical = doppler::los_doppler_elliptical(st.r, st.v, ru, vu, cfg.f_c);
        s.v_radial = doppler::radial_velocity(el, st.theta);
        out.push_back(s);
    }
    return out;
}

CsvTable doppler_table(const std::vector<DopplerSample>& s) {
    CsvTable t;
    t.header = {"t", "f_los_circular", "f_los_elliptical", "v_radial"};
    for (const auto& x : s) t.rows.push_back({num(x.t), num(x.f_circular), num(x.f_elliptical), num(x.v_radial)});
    return t;
}

}  // namespace sagin::cli
