// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace sagin::relativity {

struct RelativisticConstants {
    double c = 3e8;                    // m/s
    double GM_E = 3.986004418e14;      // m^3 s^-2
    double J2 = 1.0826300e-3;
    double R_eq = 6.3781370e6;         // m
    double phi0_over_c2 = -6.96927e-10;
};

// Coordinate minus proper time for a clock moving at constant speed v for T seconds.
double special_offset(double T, double v, const RelativisticConstants& k = {});

// Gravitational potential with the J2 term; theta_pol is the polar angle from the spin axis.
double potential(double r, double theta_pol, const RelativisticConstants& k = {});

// d(tau)/dt - 1 to first order in 1/c^2: (V - Phi0)/c^2 - v^2/(2c^2).
double rate_deviation(double r, double theta_pol, double v, const RelativisticConstants& k = {});
// 1 + rate_deviation(...)
double proper_time_rate(double r, double theta_pol, double v, const RelativisticConstants& k = {});
// sqrt(1 + 2(V - Phi0)/c^2 - v^2/c^2), kept for cross-checks
double proper_time_rate_sqrt(double r, double theta_pol, double v, const RelativisticConstants& k = {});

struct PathSample {
    double t = 0.0;          // s
    double r = 0.0;          // m
    double theta_pol = 0.0;  // rad
    double v = 0.0;          // m/s
};

// Elapsed coordinate time minus elapsed proper time along the path (Simpson rule).
double accumulated_offset(std::span<const PathSample> path, const RelativisticConstants& k = {});

}  // namespace sagin::relativity
