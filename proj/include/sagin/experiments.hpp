// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sagin/scenario.hpp"

namespace sagin::cli {

// Header, rows of preformatted cells, and extra `# key = value` lines written after the config echo.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> meta;
};

std::string csv_escape(std::string_view cell);
void write_csv(std::ostream& os, std::string_view command, const ScenarioConfig& cfg, const CsvTable& table);

// Correlation chain and link budget for one configuration.
struct OperatingPoint {
    double tau_e = 0.0;
    channel::CorrelationProfile correlation;
    channel::GammaFit fit;
    channel::BivariateGammaShape shape;
    double a_p = 0.0;
    double mean_snr = 0.0;
};

OperatingPoint operating_point(const ScenarioConfig& cfg);

enum class Sweep { snr, tau, fmax, elevation };
Sweep parse_sweep(std::string_view name);
std::string_view sweep_name(Sweep s);

// snr in dB (sets the mean SNR directly), tau in s (effective delay), fmax in Hz, elevation in degrees.
struct BerCurveOptions {
    Sweep sweep = Sweep::snr;
    double from = 0.0;
    double to = 17.0;
    int steps = 18;
    bool monte_carlo = true;
    unsigned threads = 0;
};

struct BerPoint {
    double sweep_value = 0.0;
    double snr_db = 0.0;
    double rho_j = 0.0;
    double rho_sr = 0.0;
    double eta = 0.0;
    double ber_analytic = 0.0;
    std::optional<double> ber_mc;
    double ci_halfwidth = 0.0;
    std::uint64_t n_trials = 0;
};

std::vector<double> sweep_values(double from, double to, int steps);
// Monte Carlo seed of sweep point `index`.
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index);

std::vector<BerPoint> run_ber_curve(const ScenarioConfig& cfg, const BerCurveOptions& opt);
CsvTable ber_curve_table(const std::vector<BerPoint>& points, const BerCurveOptions& opt);

struct OrbitRow {
    std::string label;
    orbit::OrbitElements el;
    double circumference = 0.0;
    double v_p = 0.0;
    double v_a = 0.0;
    double delta_T = 0.0;
};

std::vector<OrbitRow> run_orbit_report(const ScenarioConfig& cfg);
CsvTable orbit_table(const std::vector<OrbitRow>& rows);

struct RelativityReport {
    double window = 0.0;
    double v = 0.0;
    double special = 0.0;
    double general = 0.0;
    bool theta_pol_from_orbit = true;
    std::size_t samples = 0;
    bool sub_microsecond = false;
};

RelativityReport run_relativity_report(const ScenarioConfig& cfg);
CsvTable relativity_table(const RelativityReport& r);

struct ChiSquareCell {
    std::string kind;  // joint | pooled | marginal
    int i = 0;
    int j = 0;
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    std::uint64_t observed = 0;
    double expected = 0.0;
};

struct DistValidation {
    std::uint64_t n = 0;
    double rho_j = 0.0;
    double ks_gamma = 0.0;          // sampled data envelope vs fitted Gamma envelope
    double ks_shadowed_rician = 0.0;  // same samples vs the exact marginal
    double power_correlation = 0.0;
    double rho_sr = 0.0;
    double chi2 = 0.0;
    int dof = 0;
    double p_value = 0.0;
    std::vector<ChiSquareCell> cells;
};

// `bins` x `bins` joint grid on Gamma-envelope quantile edges; cells with expected count < 5 are pooled.
DistValidation run_dist_validate(const ScenarioConfig& cfg, std::uint64_t n_samples, int bins = 20,
                                 unsigned threads = 0);
CsvTable dist_table(const DistValidation& d);

struct DopplerSample {
    double t = 0.0;
    double f_circular = 0.0;
    double f_elliptical = 0.0;
    double v_radial = 0.0;
};

// Pass centred on perigee at t = 0 with maximum elevation theta0; the user rotates with the Earth.
std::vector<DopplerSample> run_doppler_profile(const ScenarioConfig& cfg, double from, double to, int steps);
CsvTable doppler_table(const std::vector<DopplerSample>& s);

}  // namespace sagin::cli
