// SPDX-License-Identifier: Apache-2.0
#include "sagin/channel.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sagin/errors.hpp"
#include "sagin/specfun.hpp"

namespace sagin::channel {

using specfun::kPi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log of C(m-1,k) K_sct^(m-1-k) K_los^k / S^(m-1): the weight of Gamma(k+1, S) in the mixture.
std::vector<double> log_mixture_weights(const ShadowedRicianParams& p) {
    const double ks = p.k_sct();
    const double kl = p.k_los();
    const double ls = std::log(ks + kl);
    std::vector<double> w(p.m);
    for (int k = 0; k < p.m; ++k) {
        const double los = (k == 0) ? 0.0 : (kl > 0.0 ? k * std::log(kl) : kNegInf);
        w[k] = log_binomial(p.m - 1, k) + (p.m - 1 - k) * std::log(ks) + los - (p.m - 1) * ls;
    }
    return w;
}

void validate(const ShadowedRicianParams& p) {
    if (!(p.b0 > 0.0)) throw DomainError("shadowed-rician: b0 must be positive");
    if (!(p.omega >= 0.0)) throw DomainError("shadowed-rician: omega must be >= 0");
    if (p.m < 1) throw DomainError("shadowed-rician: m must be an integer >= 1");
    if (std::abs(2.0 * p.b0 + p.omega - 1.0) > 1e-12) throw DomainError("shadowed-rician: 2 b0 + omega must equal 1");
}

void validate(const BivariateGammaShape& s) {
    if (!(s.gamma1 > 0.0 && s.gamma2 > 0.0)) throw DomainError("bivariate gamma: shapes must be positive");
    if (!(s.beta1 > 0.0 && s.beta2 > 0.0)) throw DomainError("bivariate gamma: rates must be positive");
    if (!(s.eta >= 0.0)) throw DomainError("bivariate gamma: eta must be >= 0");
    if (!(s.eta < 1.0)) throw DomainError("bivariate gamma: eta must be < 1");
}

double log_gamma_density(double t, double shape) { return (shape - 1.0) * std::log(t) - t - std::lgamma(shape); }

// Equal shapes, Kibble form with I_{gamma-1}.
double log_pdf_equal(double t1, double t2, double g, double eta) {
    const double z = 2.0 * std::sqrt(eta * t1 * t2) / (1.0 - eta);
    return 0.5 * (g - 1.0) * (std::log(t1) + std::log(t2) - std::log(eta)) - (t1 + t2) / (1.0 - eta) +
           specfun::log_bessel_i(g - 1.0, z) - std::lgamma(g) - std::log1p(-eta);
}

// g1 < g2, series in k with (g2 - g1)_k. Terms are positive and log-concave in k; the peak sits
// near k = z (q^2 - 1) / 2q, which is far out when eta t2 / (1 - eta) is large. Wide peaks are
// summed as an integral over k (trapezoid on a smooth, rapidly decaying integrand).
double log_pdf_series(double t1, double t2, double g1, double g2, double eta) {
    const double z = 2.0 * std::sqrt(eta * t1 * t2) / (1.0 - eta);
    const double base = (g1 - 0.5 * g2 - 0.5) * std::log(t1) + 0.5 * (g2 - 1.0) * std::log(t2) -
                        (t1 + t2) / (1.0 - eta) - std::lgamma(g1) + (g2 - g1 - 1.0) * std::log1p(-eta) -
                        0.5 * (g2 - 1.0) * std::log(eta);
    const double step = 0.5 * (std::log(eta) + std::log(t2) - std::log(t1));
    const double d = g2 - g1;
    const double lgd = std::lgamma(d);
    auto term = [&](double k) {
        return k * step + std::lgamma(d + k) - lgd - std::lgamma(k + 1.0) + specfun::log_bessel_i(g2 + k - 1.0, z);
    };

    const double q = std::exp(0.5 * step);
    double hi = 2.0 * std::max(0.0, z * (q * q - 1.0) / (2.0 * q)) + 64.0;
    while (term(hi + 1.0) > term(hi)) {
        hi *= 2.0;
        if (hi > 1e15) throw NumericError("bivariate_gamma_pdf: k-series did not converge");
    }
    double lo = 0.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = term(x1), f2 = term(x2);
    while (hi - lo > 0.5) {
        if (f1 < f2) {
            lo = x1, x1 = x2, f1 = f2;
            x2 = lo + gr * (hi - lo), f2 = term(x2);
        } else {
            hi = x2, x2 = x1, f2 = f1;
            x1 = hi - gr * (hi - lo), f1 = term(x1);
        }
    }
    const double kc = std::floor(0.5 * (lo + hi));
    const double top = std::max(term(kc), term(kc + 1.0));
    const double cut = std::log(1e-17);

    if (kc > 1.0) {
        const double curv = term(kc + 1.0) - 2.0 * term(kc) + term(kc - 1.0);
        const double sigma = curv < 0.0 ? 1.0 / std::sqrt(-curv) : 0.0;
        if (sigma > 20.0 && kc > 40.0 * sigma) {
            const double h = sigma / 8.0;
            double sum = std::exp(term(kc) - top);
            for (double sgn : {-1.0, 1.0})
                for (int i = 1; i <= 320; ++i) {
                    const double r = term(kc + sgn * i * h) - top;
                    sum += std::exp(r);
                    if (r < cut) break;
                }
            return base + top + std::log(sum * h);
        }
    }

    double sum = 0.0;
    for (double k = kc;; k += 1.0) {
        const double r = term(k) - top;
        sum += std::exp(r);
        if (r < cut && k > kc) break;
    }
    for (double k = kc - 1.0; k >= 0.0; k -= 1.0) {
        const double r = term(k) - top;
        sum += std::exp(r);
        if (r < cut) break;
    }
    return base + top + std::log(sum);
}
}  // namespace

ShadowedRicianParams ShadowedRicianParams::from_k_db(double k_db, int m) {
    if (!std::isfinite(k_db)) throw DomainError("shadowed-rician: K must be finite");
    const double k = std::pow(10.0, k_db / 10.0);
    return from_b0_omega(0.5 / (k + 1.0), k / (k + 1.0), m);
}

ShadowedRicianParams ShadowedRicianParams::from_b0_omega(double b0, double omega, int m) {
    ShadowedRicianParams p{b0, omega, m};
    validate(p);
    return p;
}

double ShadowedRicianParams::k_db() const { return 10.0 * std::log10(k()); }

double power_pdf(double x, const ShadowedRicianParams& p) {
    validate(p);
    if (x < 0.0) throw DomainError("power_pdf: x must be >= 0");
    const double s = p.k_sct() + p.k_los();
    const auto w = log_mixture_weights(p);
    double acc = 0.0;
    for (int k = 0; k < p.m; ++k) {
        if (w[k] == kNegInf) continue;
        const double lx = (k == 0) ? 0.0 : k * std::log(x / s);
        acc += std::exp(w[k] - std::log(s) - std::lgamma(k + 1.0) + lx - x / s);
    }
    return acc;
}

double power_cdf(double x, const ShadowedRicianParams& p) {
    validate(p);
    if (x < 0.0) throw DomainError("power_cdf: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double s = p.k_sct() + p.k_los();
    const double u = x / s;
    const auto w = log_mixture_weights(p);
    double tail = 0.0;
    for (int k = 0; k < p.m; ++k) {
        if (w[k] == kNegInf) continue;
        double inner = 0.0;
        double term = std::exp(-u);
        for (int q = 0; q <= k; ++q) {
            inner += term;
            term *= u / (q + 1.0);
        }
        tail += std::exp(w[k]) * inner;
    }
    return std::clamp(1.0 - tail, 0.0, 1.0);
}

double rho_z(double rho_j, int m) {
    if (!(std::abs(rho_j) <= 1.0)) throw DomainError("rho_z: |rho_j| must be <= 1");
    if (m < 1) throw DomainError("rho_z: m must be >= 1");
    const double lead = std::exp(2.0 * (std::lgamma(m + 0.5) - std::lgamma(static_cast<double>(m)))) / m;
    return lead * specfun::gauss_2f1(-0.5, -0.5, m, rho_j * rho_j);
}

double rho_sr(double rho_j, double rz, const ShadowedRicianParams& p, VarianceConvention conv) {
    validate(p);
    const double b0 = p.b0;
    const double om = p.omega;
    const double cov = 4.0 * b0 * b0 * rho_j * rho_j + om * om / p.m * rho_j * rho_j + 4.0 * b0 * om * rho_j * rz;
    const double var = conv == VarianceConvention::paper ? 4.0 * b0 * b0 + 6.0 * b0 * om + om * om / p.m
                                                         : p.power_variance();
    return cov / var;
}

CorrelationProfile correlation_profile(double tau_e, doppler::ResidualDoppler rd, const ShadowedRicianParams& p,
                                       VarianceConvention conv) {
    CorrelationProfile c;
    c.tau_e = tau_e;
    c.rho_j = doppler::rho_j(tau_e, rd);
    c.rho_z = rho_z(c.rho_j, p.m);
    c.rho_sr = rho_sr(c.rho_j, c.rho_z, p, conv);
    c.convention = conv;
    return c;
}

GammaFit fit_marginal_gamma(const ShadowedRicianParams& p, GammaFitMethod method) {
    validate(p);
    const double mean = p.mean_power();
    GammaFit fit;
    if (method == GammaFitMethod::moments) {
        fit.shape = mean * mean / p.power_variance();
        fit.rate = fit.shape / mean;
        return fit;
    }
    // maximum likelihood: ln(g) - psi(g) = ln E[x] - E[ln x]
    const double s = p.k_sct() + p.k_los();
    const auto w = log_mixture_weights(p);
    double e_log = 0.0;
    for (int k = 0; k < p.m; ++k)
        if (w[k] != kNegInf) e_log += std::exp(w[k]) * (specfun::digamma(k + 1.0) + std::log(s));
    const double target = std::log(mean) - e_log;
    if (!(target > 0.0)) throw NumericError("fit_marginal_gamma: degenerate log-moment target");
    double lo = std::log(1e-6);
    double hi = std::log(1e8);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = std::exp(mid);
        (std::log(g) - specfun::digamma(g) > target ? lo : hi) = mid;
    }
    fit.shape = std::exp(0.5 * (lo + hi));
    fit.rate = fit.shape / mean;
    return fit;
}

double gamma_power_cdf(double x, const GammaFit& fit) {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(fit.shape, fit.rate * x);
}

double gamma_envelope_cdf(double r, const GammaFit& fit) { return gamma_power_cdf(r * r, fit); }

BivariateGammaShape make_shape(const GammaFit& fit, double rho_sr) { return make_shape(fit, fit, rho_sr); }

BivariateGammaShape make_shape(const GammaFit& data, const GammaFit& pilot, double rho_sr) {
    BivariateGammaShape s;
    s.gamma1 = data.shape;
    s.gamma2 = pilot.shape;
    s.beta1 = data.rate;
    s.beta2 = pilot.rate;
    const double g_lo = std::min(s.gamma1, s.gamma2);
    const double g_hi = std::max(s.gamma1, s.gamma2);
    s.eta = std::clamp(rho_sr * std::sqrt(g_hi / g_lo), 0.0, kEtaMax);
    return s;
}

double log_bivariate_gamma_pdf(double t1, double t2, const BivariateGammaShape& s) {
    validate(s);
    if (!(t1 > 0.0 && t2 > 0.0)) return kNegInf;
    if (s.eta == 0.0) return log_gamma_density(t1, s.gamma1) + log_gamma_density(t2, s.gamma2);
    if (s.gamma1 == s.gamma2) return log_pdf_equal(t1, t2, s.gamma1, s.eta);
    if (s.gamma1 < s.gamma2) return log_pdf_series(t1, t2, s.gamma1, s.gamma2, s.eta);
    return log_pdf_series(t2, t1, s.gamma2, s.gamma1, s.eta);
}

double bivariate_gamma_pdf(double t1, double t2, const BivariateGammaShape& s) {
    return std::exp(log_bivariate_gamma_pdf(t1, t2, s));
}

double bivariate_envelope_pdf(double x, double y, const BivariateGammaShape& s) {
    if (!(x > 0.0 && y > 0.0)) return 0.0;
    return 4.0 * s.beta1 * s.beta2 * x * y * bivariate_gamma_pdf(s.beta1 * x * x, s.beta2 * y * y, s);
}

std::vector<std::vector<double>> bivariate_gamma_cdf_grid(const std::vector<double>& t1s, const std::vector<double>& t2s,
                                                          const BivariateGammaShape& s) {
    validate(s);
    if (s.gamma1 != s.gamma2) throw DomainError("bivariate_gamma_cdf: equal shapes required");
    const double g = s.gamma1;
    const double scale = 1.0 - s.eta;
    auto clip = [](double t) { return std::max(t, 0.0); };
    double hi1 = 0.0, hi2 = 0.0;
    for (double t : t1s)
        if (std::isfinite(t)) hi1 = std::max(hi1, clip(t));
    for (double t : t2s)
        if (std::isfinite(t)) hi2 = std::max(hi2, clip(t));
    const double reach = std::min(hi1, hi2);

    std::vector<std::vector<double>> out(t1s.size(), std::vector<double>(t2s.size(), 0.0));
    std::vector<double> p1(t1s.size()), p2(t2s.size());
    auto p_of = [&](double a, double t) {
        if (t <= 0.0) return 0.0;
        if (!std::isfinite(t)) return 1.0;
        return boost::math::gamma_p(a, t / scale);
    };
    const double log_eta = s.eta > 0.0 ? std::log(s.eta) : kNegInf;
    double mass = 0.0;
    for (long k = 0;; ++k) {
        const double kk = static_cast<double>(k);
        const double w = std::exp(g * std::log1p(-s.eta) + std::lgamma(g + kk) - std::lgamma(g) -
                                  std::lgamma(kk + 1.0) + (k == 0 ? 0.0 : kk * log_eta));
        mass += w;
        const double a = g + kk;
        for (std::size_t i = 0; i < t1s.size(); ++i) p1[i] = p_of(a, t1s[i]);
        for (std::size_t j = 0; j < t2s.size(); ++j) p2[j] = p_of(a, t2s[j]);
        for (std::size_t i = 0; i < t1s.size(); ++i)
            for (std::size_t j = 0; j < t2s.size(); ++j) out[i][j] += w * p1[i] * p2[j];
        // later terms add at most tail * P(gamma + k, reach) to any entry with a finite coordinate
        const double tail = std::max(0.0, 1.0 - mass);
        if (tail < 1e-15 || (kk > g * s.eta / scale && tail * p_of(a, reach) < 1e-17)) break;
        if (k > 100000000) throw NumericError("bivariate_gamma_cdf: mixture did not converge");
    }
    // entries with an infinite coordinate are exact marginals
    for (std::size_t i = 0; i < t1s.size(); ++i)
        for (std::size_t j = 0; j < t2s.size(); ++j) {
            const bool inf1 = !std::isfinite(t1s[i]);
            const bool inf2 = !std::isfinite(t2s[j]);
            if (inf1 && inf2) out[i][j] = 1.0;
            else if (inf2) out[i][j] = t1s[i] > 0.0 ? boost::math::gamma_p(g, t1s[i]) : 0.0;
            else if (inf1) out[i][j] = t2s[j] > 0.0 ? boost::math::gamma_p(g, t2s[j]) : 0.0;
        }
    return out;
}

double bivariate_gamma_cdf(double t1, double t2, const BivariateGammaShape& s) {
    return bivariate_gamma_cdf_grid({t1}, {t2}, s)[0][0];
}

ChannelPair sample_correlated_pair(const ShadowedRicianParams& p, double rho_j, RandomStream& rng) {
    if (!(std::abs(rho_j) <= 1.0)) throw DomainError("sample_correlated_pair: |rho_j| must be <= 1");
    const double rc = std::sqrt(std::max(0.0, 1.0 - rho_j * rho_j));
    auto pair = [&](double sd, double& first, double& second) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        first = sd * g1;
        second = sd * (rho_j * g1 + rc * g2);
    };
    const double sa = std::sqrt(p.b0);
    double ai1, ai2, aq1, aq2;
    pair(sa, ai1, ai2);
    pair(sa, aq1, aq2);
    const double sz = std::sqrt(p.omega / (2.0 * p.m));
    double z1 = 0.0, z2 = 0.0;
    for (int i = 0; i < 2 * p.m; ++i) {
        double x1, x2;
        pair(sz, x1, x2);
        z1 += x1 * x1;
        z2 += x2 * x2;
    }
    z1 = std::sqrt(z1);
    z2 = std::sqrt(z2);
    const double xi = 2.0 * kPi * rng.uniform();
    const double sx = std::sin(xi);
    const double cx = std::cos(xi);
    ChannelPair out;
    out.pilot = {ai1 + z1 * sx, aq1 + z1 * cx};
    out.data = {ai2 + z2 * sx, aq2 + z2 * cx};
    return out;
}

}  // namespace sagin::channel
