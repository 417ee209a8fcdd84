// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace sagin::orbit {

using Vec3 = Eigen::Vector3d;

struct BodyConstants {
    double G = 6.6743e-11;    // m^3 kg^-1 s^-2
    double M_earth = 5.972e24;  // kg
    double m_sat = 500.0;     // kg
    double R = 6.371e6;       // m

    double mu() const { return G * (M_earth + m_sat); }
};

struct OrbitElements {
    double a = 0.0;    // semi-major axis, m
    double e = 0.0;
    double b = 0.0;    // semi-minor axis, m
    double p = 0.0;    // semi-latus rectum, m
    double r_p = 0.0;  // perigee radius, m
    double r_a = 0.0;  // apogee radius, m
    double T = 0.0;    // period, s
    double mu = 0.0;   // m^3 s^-2
};

// Orientation of the orbital plane in the Earth-centred inertial frame.
// All zero: equatorial orbit, perigee on +x.
struct Orientation {
    double inclination = 0.0;
    double raan = 0.0;
    double arg_perigee = 0.0;
};

struct OrbitState {
    Vec3 r;
    Vec3 v;
    double theta = 0.0;  // true anomaly, rad
};

OrbitElements elements_from_axis(double a, double e, double mu);
OrbitElements elements_from_apsides(double H_p, double H_a, const BodyConstants& consts);
OrbitElements elements_from_state(const Vec3& r, const Vec3& v, double mu);

double radius_at_anomaly(const OrbitElements& el, double theta);
double circumference(const OrbitElements& el);
double vis_viva_speed(const OrbitElements& el, double r);

// Period of an ellipse whose perigee sits at R + H minus the circular period at R + H.
double period_difference(double H, double e, const BodyConstants& consts);

// Two-body state t seconds after perigee passage.
OrbitState propagate(const OrbitElements& el, double t, const Orientation& orient = {});

// Mean to eccentric anomaly (Newton, E0 = M + e sin M).
double solve_kepler(double mean_anomaly, double e);

}  // namespace sagin::orbit
