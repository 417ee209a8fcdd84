// SPDX-License-Identifier: Apache-2.0
#include "sagin/doppler.hpp"

#include <cmath>
#include <limits>

#include "sagin/errors.hpp"
#include "sagin/propagation.hpp"
#include "sagin/specfun.hpp"

namespace sagin::doppler {

using specfun::kPi;
using propagation::kSpeedOfLight;

double default_relative_angular_velocity(double H_os, double mu, double inclination) {
    return std::sqrt(mu / (H_os * H_os * H_os)) - kEarthRotationRate * std::cos(inclination);
}

double cross_track_angle(const PassGeometry& g) {
    return std::acos(g.R * std::cos(g.theta_max) / g.H_os) - g.theta_max;
}

double los_doppler_circular(double t, const PassGeometry& g) {
    if (!(g.H_os > g.R)) throw DomainError("los_doppler_circular: orbit radius must exceed Earth radius");
    if (!(g.theta_max > 0.0 && g.theta_max <= kPi / 2))
        throw DomainError("los_doppler_circular: maximum elevation outside (0, pi/2]");
    const double psi = g.omega_rel * (t - g.t0);
    const double cb = std::cos(cross_track_angle(g));
    const double num = g.R * g.H_os * std::sin(psi) * cb * g.omega_rel;
    const double den = std::sqrt(g.R * g.R + g.H_os * g.H_os - 2.0 * g.R * g.H_os * std::cos(psi) * cb);
    return -g.f_c / kSpeedOfLight * num / den;
}

double los_doppler_elliptical(const orbit::Vec3& r_s, const orbit::Vec3& v_s, const orbit::Vec3& r_u,
                              const orbit::Vec3& v_u, double f_c) {
    const orbit::Vec3 d = r_s - r_u;
    const double range = d.norm();
    if (range == 0.0) throw DomainError("los_doppler_elliptical: satellite and user positions coincide");
    return -f_c / kSpeedOfLight * (v_s - v_u).dot(d) / range;
}

double radial_velocity(const orbit::OrbitElements& el, double theta) {
    return std::sqrt(el.mu / el.p) * el.e * std::sin(theta);
}

double jakes_pdf(double x, ResidualDoppler rd) {
    if (!(rd.f_max > 0.0)) throw DomainError("jakes_pdf: f_max must be positive");
    const double ax = std::abs(x);
    if (ax > rd.f_max) return 0.0;
    if (ax == rd.f_max) return std::numeric_limits<double>::infinity();
    const double u = x / rd.f_max;
    return 1.0 / (kPi * rd.f_max * std::sqrt((1.0 - u) * (1.0 + u)));
}

double jakes_cdf(double x, ResidualDoppler rd) {
    if (!(rd.f_max > 0.0)) throw DomainError("jakes_cdf: f_max must be positive");
    if (x <= -rd.f_max) return 0.0;
    if (x >= rd.f_max) return 1.0;
    return 0.5 + std::asin(x / rd.f_max) / kPi;
}

double jakes_from_uniform(double u, ResidualDoppler rd) { return rd.f_max * std::cos(kPi * u); }

double sample_jakes(ResidualDoppler rd, RandomStream& rng) { return jakes_from_uniform(rng.uniform(), rd); }

double rho_j(double tau, ResidualDoppler rd) {
    if (tau < 0.0) throw DomainError("rho_j: delay must be >= 0");
    return specfun::bessel_j0(2.0 * kPi * rd.f_max * tau);
}

}  // namespace sagin::doppler
