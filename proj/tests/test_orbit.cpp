// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "sagin/errors.hpp"
#include "sagin/orbit.hpp"
#include "sagin/specfun.hpp"

using namespace sagin::orbit;
using sagin::specfun::kPi;

namespace {

// Ellipse e solving (H_a - H_p) / (2R + H_a + H_p) = e for fixed perigee altitude.
double apogee_for(double H_p, double e, const BodyConstants& c) {
    return (e * (2.0 * c.R + H_p) + H_p) / (1.0 - e);
}

}  // namespace

TEST_CASE("circular elements from apsides") {
    const BodyConstants c;
    const auto el = elements_from_apsides(300e3, 300e3, c);
    CHECK(el.e == 0.0);
    CHECK(el.a == doctest::Approx(c.R + 300e3).epsilon(1e-15));
    CHECK(el.r_p + el.r_a == doctest::Approx(2 * el.a).epsilon(1e-15));
    CHECK_THROWS_AS(elements_from_apsides(400e3, 300e3, c), sagin::DomainError);
}

TEST_CASE("apsides identity and element invariants") {
    const BodyConstants c;
    const auto el = elements_from_apsides(280e3, 1900e3, c);
    CHECK(el.r_p + el.r_a == doctest::Approx(2 * el.a).epsilon(1e-15));
    CHECK(el.b == doctest::Approx(el.a * std::sqrt(1 - el.e * el.e)).epsilon(1e-14));
    CHECK(el.p == doctest::Approx(el.a * (1 - el.e * el.e)).epsilon(1e-14));
    CHECK(el.T == doctest::Approx(2 * kPi * std::sqrt(std::pow(el.a, 3) / c.mu())).epsilon(1e-14));
    for (double th = 0; th < 2 * kPi; th += 0.05) {
        const double r = radius_at_anomaly(el, th);
        CHECK(r >= el.r_p * (1 - 1e-15));
        CHECK(r <= el.r_a * (1 + 1e-15));
    }
}

TEST_CASE("period delta via apsides reproduces the eccentric-orbit numbers") {
    const BodyConstants c;
    for (auto [e, want] : {std::pair{1e-4, 0.8135}, std::pair{1e-3, 8.1440}}) {
        const auto circ = elements_from_apsides(300e3, 300e3, c);
        const auto ell = elements_from_apsides(300e3, apogee_for(300e3, e, c), c);
        CHECK(ell.e == doctest::Approx(e).epsilon(1e-10));
        CHECK(std::abs((ell.T - circ.T) - want) < 1e-3);
        CHECK(std::abs(period_difference(300e3, e, c) - want) < 1e-3);
    }
    CHECK(period_difference(300e3, 0.0, c) == 0.0);
    double prev = 0.0;
    for (double e = 1e-5; e < 0.5; e *= 1.5) {
        const double d = period_difference(300e3, e, c);
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("radius at special anomalies") {
    const auto el = elements_from_axis(8e6, 0.2, 3.986e14);
    CHECK(radius_at_anomaly(el, 0) == doctest::Approx(el.r_p).epsilon(1e-15));
    CHECK(radius_at_anomaly(el, kPi) == doctest::Approx(el.r_a).epsilon(1e-15));
    CHECK(radius_at_anomaly(el, kPi / 2) == doctest::Approx(el.p).epsilon(1e-15));
}

TEST_CASE("circumference limits and arc-length oracle") {
    CHECK(circumference(elements_from_axis(7e6, 0.0, 3.986e14)) == doctest::Approx(2 * kPi * 7e6).epsilon(1e-15));
    const auto el = elements_from_axis(1e7, 0.5, 3.986e14);
    // parametric ellipse x = a cos u, y = b sin u
    const double arc = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double u) { return std::hypot(el.a * std::sin(u), el.b * std::cos(u)); }, 0.0, 2 * kPi, 15, 1e-14);
    CHECK(std::abs(circumference(el) / arc - 1) < 1e-6);
    for (double e : {0.0, 0.3, 0.9, 0.999}) {
        const auto x = elements_from_axis(1.0, e, 1.0);
        CHECK(circumference(x) >= 4.0);
        CHECK(circumference(x) <= 2 * kPi + 1e-15);
    }
}

TEST_CASE("vis-viva speeds") {
    const BodyConstants c;
    const auto circ = elements_from_apsides(300e3, 300e3, c);
    CHECK(vis_viva_speed(circ, circ.a) == doctest::Approx(std::sqrt(c.mu() / circ.a)).epsilon(1e-15));
    const auto el = elements_from_apsides(300e3, 2000e3, c);
    const double vp = vis_viva_speed(el, el.r_p);
    const double va = vis_viva_speed(el, el.r_a);
    CHECK(vp * vp == doctest::Approx(c.mu() / el.a * (1 + el.e) / (1 - el.e)).epsilon(1e-13));
    CHECK(va * va == doctest::Approx(c.mu() / el.a * (1 - el.e) / (1 + el.e)).epsilon(1e-13));
    CHECK(vp * el.r_p == doctest::Approx(va * el.r_a).epsilon(1e-13));
    CHECK_THROWS_AS(vis_viva_speed(el, 0.5 * el.r_p), sagin::DomainError);
    // 300 km circular speed with these constants
    CHECK(vis_viva_speed(circ, circ.a) == doctest::Approx(7729.78).epsilon(1e-5));
}

TEST_CASE("elements from state") {
    const double mu = 3.986004418e14;
    const double r = 6.7e6;
    const auto circ = elements_from_state(Vec3(r, 0, 0), Vec3(0, std::sqrt(mu / r), 0), mu);
    CHECK(circ.e < 1e-12);
    CHECK(circ.a == doctest::Approx(r).epsilon(1e-12));

    const BodyConstants c;
    const auto el = elements_from_apsides(350e3, 1200e3, c);
    const auto back = elements_from_state(Vec3(el.r_p, 0, 0), Vec3(0, vis_viva_speed(el, el.r_p), 0), el.mu);
    CHECK(std::abs(back.a / el.a - 1) < 1e-10);
    CHECK(std::abs(back.e / el.e - 1) < 1e-10);

    CHECK_THROWS_AS(elements_from_state(Vec3(r, 0, 0), Vec3(0, std::sqrt(2 * mu / r), 0), mu), sagin::DomainError);
}

TEST_CASE("propagation landmarks") {
    const BodyConstants c;
    const auto el = elements_from_apsides(300e3, 1500e3, c);
    const auto s0 = propagate(el, 0.0);
    CHECK(s0.theta == doctest::Approx(0.0));
    CHECK(s0.r.norm() == doctest::Approx(el.r_p).epsilon(1e-14));
    const auto sh = propagate(el, el.T / 2);
    CHECK(std::abs(sh.theta - kPi) < 1e-9);
    CHECK(std::abs(sh.r.norm() / el.r_a - 1) < 1e-9);

    const auto e3 = elements_from_axis(c.R + 300e3, 1e-3, c.mu());
    const auto sq = propagate(e3, e3.T / 4);
    const double r = radius_at_anomaly(e3, sq.theta);
    CHECK(std::abs(sq.r.norm() / r - 1) < 1e-12);
    CHECK(std::abs(sq.v.norm() / vis_viva_speed(e3, r) - 1) < 1e-10);
}

TEST_CASE("state round trip over random epochs and orientations") {
    const BodyConstants c;
    const auto el = elements_from_apsides(400e3, 3000e3, c);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> ut(0, 3 * el.T), ua(0, 2 * kPi);
    for (int i = 0; i < 100; ++i) {
        const Orientation o{0.5 * ua(gen), ua(gen), ua(gen)};
        const auto s = propagate(el, ut(gen), o);
        const auto b = elements_from_state(s.r, s.v, el.mu);
        CHECK(std::abs(b.a / el.a - 1) < 1e-9);
        CHECK(std::abs(b.e / el.e - 1) < 1e-9);
    }
}

TEST_CASE("period increases with semi-major axis") {
    double prev = 0;
    for (double a = 6.5e6; a < 5e7; a *= 1.2) {
        const double T = elements_from_axis(a, 0.1, 3.986e14).T;
        CHECK(T > prev);
        prev = T;
    }
}

TEST_CASE("kepler solver residual") {
    for (double e : {0.0, 0.01, 0.3, 0.7, 0.89})
        for (double M = -3.1; M < 3.1; M += 0.1) {
            const double E = solve_kepler(M, e);
            CHECK(std::abs(E - e * std::sin(E) - M) < 1e-13);
        }
}
