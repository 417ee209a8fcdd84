// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sagin/specfun.hpp"

namespace sagin::propagation {

inline constexpr double kSpeedOfLight = 3e8;

struct LinkGeometry {
    double H = 300e3;                               // satellite altitude, m
    double theta0 = 80.0 * specfun::kPi / 180.0;  // elevation, rad
    double R = 6371.393e3;                          // Earth radius, m
    double f_c = 2e9;                               // carrier, Hz
    double alpha_pl = 2.0;
    double N0_prime = 315e-6;
    double h0 = 7.5e3;                              // refractivity scale height, m
    int Q = 100;
};

struct AbsorptionSpec {
    std::vector<std::pair<std::string, double>> taus;  // (gas, optical thickness)
};

struct LinkBudget {
    double a_p = 0.0;        // received power scale, W
    double mean_snr = 0.0;   // a_p / sigma^2
};

double refractive_index(double h, const LinkGeometry& g = {});

// Chebyshev-Gauss sum for the refracted slant path over altitude [0, H].
double refracted_path_length(const LinkGeometry& g);

// Straight-line distance from the ground to altitude H at elevation theta0.
double straight_slant_range(double H, double theta0, double R);

double path_loss(double f_c, double d, double alpha_pl);
double transmittance(const AbsorptionSpec& spec);

double dbw_to_watts(double dbw);
double dbm_to_watts(double dbm);

LinkBudget received_power_gain(const LinkGeometry& g, const AbsorptionSpec& spec, double P_s_watts,
                               double noise_watts);

}  // namespace sagin::propagation
