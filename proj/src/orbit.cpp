// SPDX-License-Identifier: Apache-2.0
#include "sagin/orbit.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "sagin/errors.hpp"
#include "sagin/specfun.hpp"

namespace sagin::orbit {

using specfun::kPi;

OrbitElements elements_from_axis(double a, double e, double mu) {
    if (!(a > 0.0)) throw DomainError("orbit: semi-major axis must be positive");
    if (!(e >= 0.0 && e < 1.0)) throw DomainError("orbit: eccentricity must be in [0, 1)");
    if (!(mu > 0.0)) throw DomainError("orbit: mu must be positive");
    OrbitElements el;
    el.a = a;
    el.e = e;
    el.b = a * std::sqrt((1.0 - e) * (1.0 + e));
    el.p = a * (1.0 - e) * (1.0 + e);
    el.r_p = a * (1.0 - e);
    el.r_a = a * (1.0 + e);
    el.T = 2.0 * kPi * std::sqrt(a * a * a / mu);
    el.mu = mu;
    return el;
}

OrbitElements elements_from_apsides(double H_p, double H_a, const BodyConstants& consts) {
    if (H_p < 0.0) throw DomainError("elements_from_apsides: perigee altitude must be >= 0");
    if (H_p > H_a) throw DomainError("elements_from_apsides: perigee altitude exceeds apogee altitude");
    const double rp = consts.R + H_p;
    const double ra = consts.R + H_a;
    return elements_from_axis(0.5 * (rp + ra), (H_a - H_p) / (ra + rp), consts.mu());
}

OrbitElements elements_from_state(const Vec3& r, const Vec3& v, double mu) {
    const double rn = r.norm();
    if (rn == 0.0) throw DomainError("elements_from_state: zero position vector");
    const double energy = 0.5 * v.squaredNorm() - mu / rn;
    if (energy >= 0.0) throw DomainError("elements_from_state: unbound trajectory (energy >= 0)");
    const double a = -mu / (2.0 * energy);
    // |e_vec| equals sqrt(1 + 2 energy h^2 / mu^2) but keeps full precision near e = 0
    const Vec3 e_vec = ((v.squaredNorm() - mu / rn) * r - r.dot(v) * v) / mu;
    return elements_from_axis(a, e_vec.norm(), mu);
}

double radius_at_anomaly(const OrbitElements& el, double theta) {
    return el.p / (1.0 + el.e * std::cos(theta));
}

double circumference(const OrbitElements& el) { return 4.0 * el.a * specfun::ellip_e(el.e); }

double vis_viva_speed(const OrbitElements& el, double r) {
    const double slack = 1e-9 * el.a;
    if (r < el.r_p - slack || r > el.r_a + slack)
        throw DomainError("vis_viva_speed: radius outside [r_p, r_a]");
    return std::sqrt(el.mu * (2.0 / r - 1.0 / el.a));
}

double period_difference(double H, double e, const BodyConstants& consts) {
    if (!(e >= 0.0 && e < 1.0)) throw DomainError("period_difference: eccentricity must be in [0, 1)");
    const double r = consts.R + H;
    const double t_circ = 2.0 * kPi * std::sqrt(r * r * r / consts.mu());
    return t_circ * (std::pow(1.0 - e, -1.5) - 1.0);
}

double solve_kepler(double mean_anomaly, double e) {
    double E = mean_anomaly + e * std::sin(mean_anomaly);
    for (int it = 0; it < 50; ++it) {
        const double f = E - e * std::sin(E) - mean_anomaly;
        if (std::abs(f) < 1e-13) return E;
        E -= f / (1.0 - e * std::cos(E));
    }
    throw NumericError("solve_kepler: Newton iteration did not converge");
}

OrbitState propagate(const OrbitElements& el, double t, const Orientation& orient) {
    const double n = 2.0 * kPi / el.T;
    const double M = std::remainder(n * t, 2.0 * kPi);
    const double E = solve_kepler(M, el.e);
    const double theta = 2.0 * std::atan2(std::sqrt(1.0 + el.e) * std::sin(0.5 * E),
                                          std::sqrt(1.0 - el.e) * std::cos(0.5 * E));
    const double r = el.a * (1.0 - el.e * std::cos(E));
    const double vscale = std::sqrt(el.mu / el.p);
    const Vec3 r_pf(r * std::cos(theta), r * std::sin(theta), 0.0);
    const Vec3 v_pf(-vscale * std::sin(theta), vscale * (el.e + std::cos(theta)), 0.0);

    const Eigen::Matrix3d rot = (Eigen::AngleAxisd(orient.raan, Vec3::UnitZ()) *
                                 Eigen::AngleAxisd(orient.inclination, Vec3::UnitX()) *
                                 Eigen::AngleAxisd(orient.arg_perigee, Vec3::UnitZ()))
                                    .toRotationMatrix();
    OrbitState s;
    s.r = rot * r_pf;
    s.v = rot * v_pf;
    s.theta = theta < 0.0 ? theta + 2.0 * kPi : theta;
    return s;
}

}  // namespace sagin::orbit
