// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "sagin/ber.hpp"
#include "sagin/channel.hpp"
#include "sagin/errors.hpp"
#include "sagin/specfun.hpp"

using namespace sagin::ber;
using namespace sagin::channel;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

double normal_cdf(double x) { return boost::math::cdf(boost::math::normal_distribution<double>(), x); }

// Per-axis receiver r = alpha s + n, thresholds 0, +-2 d alpha_hat; bit errors weighted by the
// Gaussian mass of every decision region, averaged over the four levels.
double brute_force_ber(double alpha, double alpha_hat, const QamLink& l) {
    const double inf = std::numeric_limits<double>::infinity();
    const double thr = 2 * l.d * alpha_hat;
    const double edges[5] = {-inf, -thr, 0.0, thr, inf};
    const double lv[4] = {-3, -1, 1, 3};
    double errs = 0;
    for (int i = 0; i < 4; ++i) {
        const double x = alpha * lv[i] * l.d;
        for (int j = 0; j < 4; ++j) {
            const double p = normal_cdf((edges[j + 1] - x) / l.sigma_n) - normal_cdf((edges[j] - x) / l.sigma_n);
            errs += p * std::popcount(kGrayBits[i] ^ kGrayBits[j]);
        }
    }
    return errs / 8.0;
}

double q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// E[g(alpha, alpha_hat)] by nested adaptive quadrature in the power domain. Mass above L is
// below 1e-12 for the shapes used here.
template <class G>
double expect_2d(const BivariateGammaShape& s, G g, double L = 80.0) {
    const auto inner = [&](double t1) {
        return GK::integrate(
            [&](double t2) {
                return g(std::sqrt(t1 / s.beta1), std::sqrt(t2 / s.beta2)) * bivariate_gamma_pdf(t1, t2, s);
            },
            0.0, L, 15, 1e-9);
    };
    return GK::integrate(inner, 0.0, L, 15, 1e-9);
}

BivariateGammaShape operating_point(double kdb = 12.0, int m = 8, double tau = 2e-4) {
    const auto p = ShadowedRicianParams::from_k_db(kdb, m);
    return make_shape(fit_marginal_gamma(p), correlation_profile(tau, {100.0}, p).rho_sr);
}

}  // namespace

TEST_CASE("link normalization") {
    const auto l = QamLink::from_snr_db(10.0, 2.0);
    CHECK(10 * l.d * l.d == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(l.snr() == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(l.d / l.sigma_n == doctest::Approx(std::sqrt(10.0 / 5.0)).epsilon(1e-15));
    CHECK_THROWS_AS(QamLink::from_snr(-1.0), sagin::DomainError);
}

TEST_CASE("gray map and decisions") {
    for (int i = 0; i < 3; ++i) CHECK(std::popcount(kGrayBits[i] ^ kGrayBits[i + 1]) == 1);
    CHECK(decide_level(-5.0, 2.0) == 0);
    CHECK(decide_level(-1.0, 2.0) == 1);
    CHECK(decide_level(0.5, 2.0) == 2);
    CHECK(decide_level(2.5, 2.0) == 3);
}

TEST_CASE("conditional BER collapses to AWGN") {
    for (double db : {0.0, 5.0, 10.0, 17.0, 25.0}) {
        const auto l = QamLink::from_snr_db(db);
        const double r = l.d / l.sigma_n;
        const double awgn = 0.25 * (3 * q(r) + 2 * q(3 * r) - q(5 * r));
        CHECK(std::abs(conditional_ber_16qam(1, 1, l) - awgn) < 1e-14);
        CHECK(std::abs(awgn_ber_16qam(l) - awgn) < 1e-15);
        CHECK(std::abs(conditional_ber_16qam(1, 1, l) - brute_force_ber(1, 1, l)) < 1e-9);
    }
}

TEST_CASE("conditional BER against the per-symbol oracle") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> ua(0.0, 2.5), us(0.05, 3.0);
    for (int i = 0; i < 200; ++i) {
        const QamLink l{1.0, us(gen)};
        const double a = ua(gen), ah = ua(gen);
        const double v = conditional_ber_16qam(a, ah, l);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(std::abs(v - brute_force_ber(a, ah, l)) < 1e-9);
    }
    const QamLink tiny{1.0, 1e-6};
    CHECK(std::abs(conditional_ber_16qam(0, 1, tiny) - brute_force_ber(0, 1, tiny)) < 1e-9);
    CHECK(conditional_ber_16qam(0.7, 0.7, tiny) < 1e-300);
    CHECK(conditional_ber_16qam(0.7, 0.7, QamLink{1.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(conditional_ber_16qam(-0.1, 1, tiny), sagin::DomainError);
}

TEST_CASE("upsilon limits") {
    const BivariateGammaShape s{3.0, 3.0, 0.7, 3.0, 3.0};
    const BivariateGammaShape u{2.3, 3.7, 0.6, 1.7, 2.9};
    // the Craig weights sum to 1/2 up to the O(1/Q^2) Chebyshev-Gauss error
    CHECK(std::abs(upsilon(0, 0, s, 100) - 0.5) < 3e-5);
    CHECK(std::abs(upsilon(0, 0, u, 100) - 0.5) < 3e-5);
    CHECK(std::abs(upsilon(0, 0, s, 1000) - 0.5) < 3e-7);
    CHECK_THROWS_AS(upsilon(1, 0, s, 0), sagin::DomainError);
    CHECK_THROWS_AS(upsilon(1, 0, BivariateGammaShape{2, 2, 1.0, 1, 1}, 10), sagin::DomainError);
}

TEST_CASE("upsilon near independence matches the separable integral") {
    for (auto [g1, g2, b1, b2] : {std::tuple{4.4, 4.4, 4.4, 4.4}, std::tuple{2.3, 3.7, 1.7, 2.9}}) {
        const BivariateGammaShape s{g1, g2, 1e-9, b1, b2};
        for (double z : {0.5, 1.5, 3.0}) {
            const double ref = GK::integrate(
                [&](double t) { return q(z * std::sqrt(t / b1)) * std::exp((g1 - 1) * std::log(t) - t - std::lgamma(g1)); },
                0.0, std::numeric_limits<double>::infinity(), 15, 1e-12);
            CHECK(std::abs(upsilon(z, 0, s, 100) / ref - 1) < 1e-4);
        }
    }
}

TEST_CASE("upsilon against 2-D quadrature of its definition") {
    const auto op = operating_point();
    CHECK(op.eta > 0.99);
    const BivariateGammaShape u{2.3, 3.7, 0.6, 1.7, 2.9};
    const BivariateGammaShape v{3.9, 1.4, 0.45, 2.2, 1.1};
    struct Case {
        BivariateGammaShape s;
        double z, zeta;
    };
    for (const auto& [s, z, zeta] : {Case{op, 1.2, 0.0}, Case{op, 2.0, -1.3}, Case{u, -0.7, 1.4}, Case{u, 0.9, 0.8},
                                     Case{v, 2.0, -1.3}, Case{v, 1.2, 0.0}}) {
        const double ref = expect_2d(s, [&](double a, double ah) { return q(z * a + zeta * ah); });
        INFO("g1=" << s.gamma1 << " g2=" << s.gamma2 << " z=" << z << " zeta=" << zeta);
        CHECK(std::abs(upsilon(z, zeta, s, 100) / ref - 1) < 1e-3);
    }
}

TEST_CASE("closed-form BER against 2-D quadrature of the conditional BER") {
    const auto op = operating_point();
    const BivariateGammaShape u{2.3, 3.7, 0.6, 1.7, 2.9};
    for (auto [s, db] : {std::pair{op, 12.0}, std::pair{u, 3.0}}) {
        const auto l = QamLink::from_snr_db(db);
        const double ref = expect_2d(s, [&](double a, double ah) { return conditional_ber_16qam(a, ah, l); });
        CHECK(std::abs(average_ber_closed_form(l, s, 100) / ref - 1) < 1e-3);
    }
}

TEST_CASE("closed-form BER limits and operating point") {
    const auto op = operating_point();
    CHECK(std::abs(average_ber_closed_form(QamLink{1.0, 1e6}, op, 100) - 0.5) < 1e-3);
    CHECK(average_ber_closed_form(QamLink::from_snr_db(15.0), op, 100) > 1e-2);

    // eta -> 1 leaves the fitted Gamma marginal with perfect CSI
    const auto p = ShadowedRicianParams::from_k_db(12.0, 8);
    const auto fit = fit_marginal_gamma(p);
    const auto pcsi = make_shape(fit, 1.0);
    const auto l = QamLink::from_snr_db(21.0);
    const double r = l.d / l.sigma_n;
    const auto awgn = [&](double x) {
        const double a = r * std::sqrt(x);
        return 0.25 * (3 * q(a) + 2 * q(3 * a) - q(5 * a));
    };
    const double inf = std::numeric_limits<double>::infinity();
    const double on_gamma = GK::integrate(
        [&](double x) {
            return awgn(x) * std::exp((fit.shape - 1) * std::log(x) + fit.shape * std::log(fit.rate) - fit.rate * x -
                                      std::lgamma(fit.shape));
        },
        0.0, inf, 15, 1e-13);
    const double on_sr = GK::integrate([&](double x) { return awgn(x) * power_pdf(x, p); }, 0.0, inf, 15, 1e-13);
    const double cf = average_ber_closed_form(l, pcsi, 100);
    CHECK(std::abs(cf / on_gamma - 1) < 5e-3);
    // the Gamma fit has a thinner deep-fade tail than the shadowed-Rician law it replaces
    MESSAGE("perfect-CSI BER at 21 dB: closed form " << cf << ", shadowed-Rician marginal " << on_sr);
}

TEST_CASE("BER is monotone in SNR and in eta") {
    const auto op = operating_point();
    double prev = 1.0;
    for (double db = 0; db <= 17.0; db += 1.0) {
        const double b = average_ber_closed_form(QamLink::from_snr_db(db), op, 100);
        CHECK(b <= prev);
        prev = b;
    }
    const auto l = QamLink::from_snr_db(12.0);
    prev = 1.0;
    for (double eta : {0.0, 0.3, 0.6, 0.9, 0.99, 0.999, 0.9999}) {
        auto s = op;
        s.eta = eta;
        const double b = average_ber_closed_form(l, s, 100);
        CHECK(b <= prev);
        prev = b;
    }
}

TEST_CASE("series truncation threshold") {
    const BivariateGammaShape u{2.3, 3.7, 0.6, 1.7, 2.9};
    const auto l = QamLink::from_snr_db(9.0);
    const double a = average_ber_closed_form(l, u, 60, {1e-12, 500});
    const double b = average_ber_closed_form(l, u, 60, {1e-14, 500});
    CHECK(std::abs(a - b) < 1e-10);
    // a nearly coherent unequal pair needs long series; growth past the cap is reported
    const BivariateGammaShape hot{1.0, 40.0, 0.999, 1.0, 40.0};
    CHECK_THROWS_AS(upsilon(1.0, 0.5, hot, 8), sagin::NumericError);
}

TEST_CASE("monte carlo receiver") {
    const auto p = ShadowedRicianParams::from_k_db(12.0, 8);
    const auto clean = monte_carlo_ber(p, 1.0, QamLink{1.0, 0.0}, 20000, 1);
    CHECK(clean.bit_errors == 0);
    CHECK(clean.halfwidth > 0.0);
    CHECK(monte_carlo_ber(p, 1.0, QamLink{1.0, 0.0}, 20000, 1, McMode::full_complex).bit_errors == 0);

    const double rj = correlation_profile(2e-4, {100.0}, p).rho_j;
    const auto l = QamLink::from_snr_db(9.0);
    const auto a = monte_carlo_ber(p, rj, l, 100000, 77, McMode::amplitude_model, 1);
    const auto b = monte_carlo_ber(p, rj, l, 100000, 77, McMode::amplitude_model, 5);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.bits == 400000);

    // same channel draws averaged through the conditional BER
    double rb = 0;
    const int n = 100000;
    for (int t = 0; t < n; ++t) {
        sagin::RandomStream rng(77, t);
        const auto h = sample_correlated_pair(p, rj, rng);
        rb += conditional_ber_16qam(std::abs(h.data), std::abs(h.pilot), l);
    }
    rb /= n;
    CHECK(std::abs(a.ber - rb) < 3 * a.halfwidth);

    // with identical pilot and data epochs the phase rotation is removed exactly
    const auto c = monte_carlo_ber(p, 1.0, l, 200000, 3, McMode::amplitude_model);
    const auto f = monte_carlo_ber(p, 1.0, l, 200000, 3, McMode::full_complex);
    CHECK(std::abs(c.ber - f.ber) < 3 * std::hypot(c.halfwidth, f.halfwidth));
    CHECK_THROWS_AS(monte_carlo_ber(p, 1.0, l, 0, 3), sagin::DomainError);
}

TEST_CASE("wilson half-width") {
    CHECK(wilson_halfwidth(0, 0) == 0.0);
    CHECK(wilson_halfwidth(0, 1000) > 0.0);
    // large-n limit approaches the Wald width
    const double w = wilson_halfwidth(500000, 1000000);
    CHECK(w == doctest::Approx(1.959963984540054 * std::sqrt(0.25 / 1e6)).epsilon(1e-5));
}
