// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sagin/orbit.hpp"
#include "sagin/random.hpp"

namespace sagin::doppler {

inline constexpr double kEarthRotationRate = 7.2921159e-5;  // rad/s

struct PassGeometry {
    double theta_max = 0.0;  // maximum elevation of the pass, rad
    double omega_rel = 0.0;  // relative angular velocity, rad/s
    double t0 = 0.0;         // epoch of maximum elevation, s
    double H_os = 0.0;       // orbital radius R + H, m
    double R = 6371.393e3;   // Earth radius, m
    double f_c = 2e9;        // Hz
};

struct ResidualDoppler {
    double f_max = 0.0;  // Hz
};

// omega_sat - omega_E cos(i), omega_sat = sqrt(mu / H_os^3)
double default_relative_angular_velocity(double H_os, double mu, double inclination);

// Earth-central angle between the user and the sub-satellite track at closest approach.
double cross_track_angle(const PassGeometry& g);

double los_doppler_circular(double t, const PassGeometry& g);
double los_doppler_elliptical(const orbit::Vec3& r_s, const orbit::Vec3& v_s, const orbit::Vec3& r_u,
                              const orbit::Vec3& v_u, double f_c);
double radial_velocity(const orbit::OrbitElements& el, double theta);

// Arcsine density on (-f_max, f_max); +inf exactly at |x| = f_max.
double jakes_pdf(double x, ResidualDoppler rd);
double jakes_cdf(double x, ResidualDoppler rd);
double sample_jakes(ResidualDoppler rd, RandomStream& rng);
// Inverse-CDF map used by sample_jakes: f_max cos(pi u).
double jakes_from_uniform(double u, ResidualDoppler rd);

// J0(2 pi f_max tau)
double rho_j(double tau, ResidualDoppler rd);

}  // namespace sagin::doppler
