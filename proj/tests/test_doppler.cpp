// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "sagin/doppler.hpp"
#include "sagin/errors.hpp"
#include "sagin/orbit.hpp"
#include "sagin/propagation.hpp"
#include "sagin/specfun.hpp"

using namespace sagin::doppler;
using sagin::RandomStream;
using sagin::orbit::Vec3;
using sagin::specfun::kPi;

namespace {

PassGeometry leo_pass() {
    PassGeometry g;
    g.H_os = g.R + 300e3;
    g.theta_max = 60.0 * kPi / 180;
    g.omega_rel = std::sqrt(3.986004418e14 / std::pow(g.H_os, 3));
    g.t0 = 100.0;
    return g;
}

}  // namespace

TEST_CASE("circular LoS Doppler symmetry and bound") {
    const auto g = leo_pass();
    CHECK(los_doppler_circular(g.t0, g) == doctest::Approx(0.0));
    for (double dt : {1.0, 30.0, 120.0}) {
        CHECK(los_doppler_circular(g.t0 - dt, g) > 0.0);
        CHECK(los_doppler_circular(g.t0 - dt, g) == doctest::Approx(-los_doppler_circular(g.t0 + dt, g)));
    }
    const double bound = g.f_c * g.H_os * g.omega_rel / sagin::propagation::kSpeedOfLight;
    CHECK(bound < 5.3e4);
    double prev = los_doppler_circular(g.t0 - 400, g);
    for (double t = g.t0 - 400; t <= g.t0 + 400; t += 0.5) {
        const double f = los_doppler_circular(t, g);
        CHECK(std::abs(f) <= bound);
        CHECK(std::abs(f - prev) < 1e3);
        prev = f;
    }
}

TEST_CASE("elliptical LoS Doppler sign conventions") {
    const Vec3 rs(7e6, 0, 0), ru(6.4e6, 0, 0);
    CHECK(los_doppler_elliptical(rs, Vec3(0, 7e3, 0), ru, Vec3(0, 7e3, 0), 2e9) == 0.0);
    CHECK(los_doppler_elliptical(rs, Vec3(0, 7e3, 1e3), ru, Vec3::Zero(), 2e9) == doctest::Approx(0.0));
    const double u = 5e3;
    CHECK(los_doppler_elliptical(rs, Vec3(-u, 0, 0), ru, Vec3::Zero(), 2e9) == doctest::Approx(2e9 * u / 3e8));
    CHECK_THROWS_AS(los_doppler_elliptical(rs, Vec3::Zero(), rs, Vec3::Zero(), 2e9), sagin::DomainError);
}

TEST_CASE("elliptical form converges to the circular form as e -> 0") {
    auto g = leo_pass();
    g.t0 = 0.0;
    const double mu = 3.986004418e14;
    const auto el = sagin::orbit::elements_from_axis(g.H_os, 1e-9, mu);
    g.omega_rel = 2 * kPi / el.T;
    const double beta = cross_track_angle(g);
    // user under the pass, offset across track by beta, perigee over the closest approach
    const Vec3 ru = g.R * Vec3(std::cos(beta), 0, std::sin(beta));
    for (double t = -200; t <= 200; t += 10) {
        if (t == 0.0) continue;
        const auto s = sagin::orbit::propagate(el, t);
        const double fe = los_doppler_elliptical(s.r, s.v, ru, Vec3::Zero(), g.f_c);
        const double fc = los_doppler_circular(t, g);
        CHECK(std::abs(fe / fc - 1) < 1e-3);
    }
}

TEST_CASE("radial velocity") {
    const auto el = sagin::orbit::elements_from_axis(7e6, 0.05, 3.986e14);
    CHECK(radial_velocity(el, 0) == 0.0);
    CHECK(radial_velocity(el, kPi / 2) == doctest::Approx(std::sqrt(el.mu / el.p) * el.e));
    const auto circ = sagin::orbit::elements_from_axis(7e6, 0.0, 3.986e14);
    for (double th = 0; th < 6.3; th += 0.3) CHECK(radial_velocity(circ, th) == 0.0);
}

TEST_CASE("jakes density") {
    const ResidualDoppler rd{100.0};
    CHECK(jakes_pdf(0.0, rd) == doctest::Approx(1 / (100 * kPi)));
    CHECK(jakes_pdf(30.0, rd) == jakes_pdf(-30.0, rd));
    CHECK(jakes_pdf(150.0, rd) == 0.0);
    CHECK(std::isinf(jakes_pdf(100.0, rd)));
    // x = f_max sin u removes the endpoint singularities
    const double mass = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double u) { return jakes_pdf(rd.f_max * std::sin(u), rd) * rd.f_max * std::cos(u); }, -kPi / 2 + 1e-12,
        kPi / 2 - 1e-12, 10, 1e-12);
    CHECK(std::abs(mass - 1) < 1e-6);
}

TEST_CASE("jakes sampler") {
    const ResidualDoppler rd{100.0};
    CHECK(std::abs(jakes_from_uniform(0.5, rd)) < 1e-10);
    RandomStream rng(2024, 1);
    const int n = 1000000;
    std::vector<double> xs(n);
    double s = 0, s2 = 0;
    for (auto& x : xs) {
        x = sample_jakes(rd, rng);
        s += x;
        s2 += x * x;
    }
    std::sort(xs.begin(), xs.end());
    double ks = 0;
    for (int i = 0; i < n; ++i) {
        const double F = jakes_cdf(xs[i], rd);
        ks = std::max({ks, std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)});
    }
    CHECK(ks < 0.002);
    CHECK(std::abs(s / n) < 3 * (rd.f_max / std::sqrt(2.0)) / 1000);
    // var(x^2) = f^4 (3/8 - 1/4) for the arcsine law
    CHECK(std::abs(s2 / n - rd.f_max * rd.f_max / 2) < 3 * rd.f_max * rd.f_max * std::sqrt(0.125 / n));
}

TEST_CASE("rho_j") {
    const ResidualDoppler rd{100.0};
    CHECK(rho_j(0.0, rd) == 1.0);
    const double x = 0.04 * kPi;
    double series = 0, term = 1;
    for (int k = 0; k < 30; ++k) {
        series += term;
        term *= -(x * x / 4) / ((k + 1.0) * (k + 1.0));
    }
    CHECK(std::abs(rho_j(0.2e-3, rd) - series) < 1e-14);
    CHECK(std::abs(rho_j(2.404825557695773 / (2 * kPi * 100), rd)) < 1e-10);
    for (double tau = 0; tau < 0.1; tau += 1e-4) CHECK(std::abs(rho_j(tau, rd)) <= 1.0);
}
