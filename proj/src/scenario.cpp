// SPDX-License-Identifier: Apache-2.0
#include "sagin/scenario.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "sagin/errors.hpp"

namespace sagin::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
    return out;
}

long long parse_int(std::string_view key, std::string_view v) {
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        // accept integral values written as 1e6
        const double d = parse_double(key, v);
        if (d != std::floor(d) || std::abs(d) > 9e15) throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, v));
        return static_cast<long long>(d);
    }
    return out;
}

struct KeySpec {
    std::string name;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::optional<std::string>(const ScenarioConfig&)> get;
};

KeySpec real(std::string name, double ScenarioConfig::*field) {
    return {name, [name, field](ScenarioConfig& c, std::string_view v) { c.*field = parse_double(name, v); },
            [field](const ScenarioConfig& c) -> std::optional<std::string> { return format_number(c.*field); }};
}

KeySpec optional_real(std::string name, std::optional<double> ScenarioConfig::*field) {
    return {name, [name, field](ScenarioConfig& c, std::string_view v) { c.*field = parse_double(name, v); },
            [field](const ScenarioConfig& c) -> std::optional<std::string> {
                if (!(c.*field)) return std::nullopt;
                return format_number(*(c.*field));
            }};
}

KeySpec integer(std::string name, int ScenarioConfig::*field) {
    return {name,
            [name, field](ScenarioConfig& c, std::string_view v) {
                const long long x = parse_int(name, v);
                if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(fmt::format("{}: out of range", name));
                c.*field = static_cast<int>(x);
            },
            [field](const ScenarioConfig& c) -> std::optional<std::string> { return std::to_string(c.*field); }};
}

KeySpec count(std::string name, std::uint64_t ScenarioConfig::*field) {
    return {name,
            [name, field](ScenarioConfig& c, std::string_view v) {
                std::uint64_t u = 0;
                const auto res = std::from_chars(v.data(), v.data() + v.size(), u);
                if (res.ec == std::errc() && res.ptr == v.data() + v.size()) {
                    c.*field = u;
                    return;
                }
                const long long x = parse_int(name, v);
                if (x < 0) throw ConfigError(fmt::format("{}: must be >= 0", name));
                c.*field = static_cast<std::uint64_t>(x);
            },
            [field](const ScenarioConfig& c) -> std::optional<std::string> { return std::to_string(c.*field); }};
}

template <class E>
KeySpec choice(std::string name, E ScenarioConfig::*field, std::vector<std::pair<std::string, E>> options) {
    return {name,
            [name, field, options](ScenarioConfig& c, std::string_view v) {
                for (const auto& [label, value] : options)
                    if (v == label) {
                        c.*field = value;
                        return;
                    }
                std::string all;
                for (const auto& [label, value] : options) all += (all.empty() ? "" : "|") + label;
                throw ConfigError(fmt::format("{}: expected one of {}, got '{}'", name, all, v));
            },
            [field, options](const ScenarioConfig& c) -> std::optional<std::string> {
                for (const auto& [label, value] : options)
                    if (c.*field == value) return label;
                return std::nullopt;
            }};
}

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = [] {
        using channel::GammaFitMethod;
        using channel::VarianceConvention;
        std::vector<KeySpec> t;
        t.push_back(real("orbit.H_p", &ScenarioConfig::H_p));
        t.push_back(optional_real("orbit.H_a", &ScenarioConfig::H_a));
        t.push_back(real("orbit.e", &ScenarioConfig::e));
        t.push_back(real("orbit.inclination", &ScenarioConfig::inclination));
        t.push_back(real("orbit.raan", &ScenarioConfig::raan));
        t.push_back(real("orbit.arg_perigee", &ScenarioConfig::arg_perigee));
        t.push_back(real("orbit.R", &ScenarioConfig::R));
        t.push_back(real("link.f_c", &ScenarioConfig::f_c));
        t.push_back(real("link.theta0", &ScenarioConfig::theta0));
        t.push_back(real("link.P_s_dBW", &ScenarioConfig::P_s_dBW));
        t.push_back(real("link.noise_dBm", &ScenarioConfig::noise_dBm));
        t.push_back(real("link.alpha_pl", &ScenarioConfig::alpha_pl));
        t.push_back(real("propagation.N0_prime", &ScenarioConfig::N0_prime));
        t.push_back(real("propagation.h0", &ScenarioConfig::h0));
        t.push_back(integer("propagation.Q", &ScenarioConfig::propagation_Q));
        t.push_back(integer("channel.m", &ScenarioConfig::m));
        t.push_back(real("channel.K_dB", &ScenarioConfig::K_dB));
        t.push_back(choice("channel.variance_convention", &ScenarioConfig::variance_convention,
                           {{"derived", VarianceConvention::derived}, {"paper", VarianceConvention::paper}}));
        t.push_back(choice("channel.gamma_fit", &ScenarioConfig::gamma_fit,
                           {{"moments", GammaFitMethod::moments}, {"mle", GammaFitMethod::mle}}));
        t.push_back(real("doppler.f_max", &ScenarioConfig::f_max));
        t.push_back(real("delay.tau", &ScenarioConfig::tau));
        t.push_back(real("delay.tau_s", &ScenarioConfig::tau_s));
        t.push_back(integer("numerics.Q", &ScenarioConfig::Q));
        t.push_back(integer("numerics.k_max", &ScenarioConfig::k_max));
        t.push_back(count("numerics.trials", &ScenarioConfig::trials));
        t.push_back(count("numerics.seed", &ScenarioConfig::seed));
        t.push_back(choice("numerics.mc_mode", &ScenarioConfig::mc_mode,
                           {{"amplitude_model", ber::McMode::amplitude_model},
                            {"full_complex", ber::McMode::full_complex}}));
        t.push_back(real("relativity.window", &ScenarioConfig::rel_window));
        t.push_back(real("relativity.v", &ScenarioConfig::rel_v));
        t.push_back(optional_real("relativity.theta_pol", &ScenarioConfig::rel_theta_pol));
        t.push_back(real("relativity.dt", &ScenarioConfig::rel_dt));
        return t;
    }();
    return table;
}

void require(bool ok, std::string_view key, std::string_view what) {
    if (!ok) throw ConfigError(fmt::format("{}: {}", key, what));
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v == 0.0 ? 0.0 : v); }

channel::ShadowedRicianParams ScenarioConfig::channel_params() const {
    return channel::ShadowedRicianParams::from_k_db(K_dB, m);
}

propagation::LinkGeometry ScenarioConfig::link_geometry() const {
    propagation::LinkGeometry g;
    g.H = H_p;
    g.theta0 = theta0;
    g.R = R;
    g.f_c = f_c;
    g.alpha_pl = alpha_pl;
    g.N0_prime = N0_prime;
    g.h0 = h0;
    g.Q = propagation_Q;
    return g;
}

propagation::AbsorptionSpec ScenarioConfig::absorption_spec() const { return {absorption}; }

orbit::BodyConstants ScenarioConfig::body() const {
    orbit::BodyConstants b;
    b.R = R;
    return b;
}

orbit::OrbitElements ScenarioConfig::orbit_elements() const {
    const auto b = body();
    if (H_a) return orbit::elements_from_apsides(H_p, *H_a, b);
    return orbit::elements_from_axis((R + H_p) / (1.0 - e), e, b.mu());
}

orbit::Orientation ScenarioConfig::orientation() const { return {inclination, raan, arg_perigee}; }

void validate(const ScenarioConfig& c) {
    require(c.R > 0, "orbit.R", "must be > 0");
    require(c.H_p > 0, "orbit.H_p", "must be > 0");
    require(c.e >= 0 && c.e < 1, "orbit.e", "must lie in [0, 1)");
    if (c.H_a) {
        require(*c.H_a >= c.H_p, "orbit.H_a", "must be >= orbit.H_p");
        require(c.e == 0.0, "orbit.H_a", "orbit.H_a and orbit.e are exclusive");
    }
    require(c.f_c > 0, "link.f_c", "must be > 0");
    require(c.theta0 > 0 && c.theta0 <= specfun::kPi / 2, "link.theta0", "must lie in (0, pi/2]");
    require(c.alpha_pl > 0, "link.alpha_pl", "must be > 0");
    for (const auto& [gas, t] : c.absorption) require(t >= 0, "absorption." + gas, "optical thickness must be >= 0");
    require(c.N0_prime >= 0, "propagation.N0_prime", "must be >= 0");
    require(c.h0 > 0, "propagation.h0", "must be > 0");
    require(c.propagation_Q >= 1, "propagation.Q", "must be >= 1");
    require(c.m >= 1, "channel.m", "must be an integer >= 1");
    require(c.f_max > 0, "doppler.f_max", "must be > 0");
    require(c.tau >= 0, "delay.tau", "must be >= 0");
    require(c.tau_s >= 0, "delay.tau_s", "must be >= 0");
    require(c.Q >= 1, "numerics.Q", "must be >= 1");
    require(c.k_max >= 1, "numerics.k_max", "must be >= 1");
    require(c.trials >= 1, "numerics.trials", "must be >= 1");
    require(c.rel_window > 0, "relativity.window", "must be > 0");
    require(c.rel_v >= 0 && c.rel_v < 3e8, "relativity.v", "must lie in [0, c)");
    require(c.rel_dt > 0 && c.rel_dt <= 1.0, "relativity.dt", "must lie in (0, 1] s");
    if (c.rel_theta_pol) require(*c.rel_theta_pol >= 0 && *c.rel_theta_pol <= specfun::kPi, "relativity.theta_pol", "must lie in [0, pi]");
}

ScenarioConfig parse_scenario(std::string_view text, std::string_view source) {
    ScenarioConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = [&] { return fmt::format("{}:{}", source, line_no); };
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(fmt::format("{}: expected 'key = value'", where()));
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(fmt::format("{}: missing key", where()));
        if (value.empty()) throw ConfigError(fmt::format("{}: {}: missing value", where(), key));
        if (!seen.insert(std::string(key)).second) throw ConfigError(fmt::format("{}: duplicate key '{}'", where(), key));
        try {
            if (key.starts_with("absorption.") && key.size() > 11) {
                cfg.absorption.emplace_back(std::string(key.substr(11)), parse_double(key, value));
                continue;
            }
            bool known = false;
            for (const auto& spec : key_table())
                if (spec.name == key) {
                    spec.set(cfg, value);
                    known = true;
                    break;
                }
            if (!known) throw ConfigError(fmt::format("unknown key '{}'", key));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}: {}", where(), e.what()));
        }
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("{}: cannot open file", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& spec : key_table())
        if (auto v = spec.get(cfg)) out.emplace_back(spec.name, *v);
    for (const auto& [gas, t] : cfg.absorption) out.emplace_back("absorption." + gas, format_number(t));
    return out;
}

}  // namespace sagin::cli
