// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sagin/ber.hpp"
#include "sagin/channel.hpp"
#include "sagin/doppler.hpp"
#include "sagin/orbit.hpp"
#include "sagin/propagation.hpp"

namespace sagin::cli {

struct ScenarioConfig {
    // orbit
    double H_p = 300e3;                // perigee altitude, m
    std::optional<double> H_a;         // apogee altitude, m; exclusive with e
    double e = 0.0;
    double inclination = 0.0;          // rad
    double raan = 0.0;                 // rad
    double arg_perigee = 0.0;          // rad
    double R = 6371.393e3;             // Earth radius, m

    // link
    double f_c = 2e9;                  // Hz
    double theta0 = 80.0 * specfun::kPi / 180.0;  // rad
    double P_s_dBW = 36.0;
    double noise_dBm = -90.0;
    double alpha_pl = 2.0;
    std::vector<std::pair<std::string, double>> absorption;

    // propagation
    double N0_prime = 315e-6;
    double h0 = 7.5e3;                 // m
    int propagation_Q = 100;

    // channel
    int m = 8;
    double K_dB = 12.0;
    channel::VarianceConvention variance_convention = channel::VarianceConvention::derived;
    channel::GammaFitMethod gamma_fit = channel::GammaFitMethod::moments;

    double f_max = 100.0;              // Hz
    double tau = 2e-4;                 // s
    double tau_s = 0.0;                // s

    // numerics
    int Q = 100;
    int k_max = 500;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    ber::McMode mc_mode = ber::McMode::amplitude_model;

    // relativity report
    double rel_window = 317.0;         // s
    double rel_v = 7.9035e3;           // m/s
    std::optional<double> rel_theta_pol;  // rad; from the orbit geometry when unset
    double rel_dt = 0.1;               // s

    double tau_e() const { return tau + tau_s; }
    channel::ShadowedRicianParams channel_params() const;
    propagation::LinkGeometry link_geometry() const;
    propagation::AbsorptionSpec absorption_spec() const;
    orbit::BodyConstants body() const;
    orbit::OrbitElements orbit_elements() const;
    orbit::Orientation orientation() const;
};

// Parses the line-oriented `key = value` format (`#` comments, dotted keys), fills defaults and
// validates. Errors carry the source name and line number, or the offending key.
ScenarioConfig parse_scenario(std::string_view text, std::string_view source = "<string>");
ScenarioConfig load_scenario(const std::string& path);
void validate(const ScenarioConfig& cfg);

// Resolved configuration as (key, value) pairs in the same format, in a fixed order.
std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& cfg);

std::string format_number(double v);

}  // namespace sagin::cli
