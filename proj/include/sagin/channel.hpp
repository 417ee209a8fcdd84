// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "sagin/doppler.hpp"
#include "sagin/random.hpp"

namespace sagin::channel {

// Shadowed-Rician small-scale fading with 2 b0 + Omega = 1.
struct ShadowedRicianParams {
    double b0 = 0.5;
    double omega = 0.0;
    int m = 1;

    static ShadowedRicianParams from_k_db(double k_db, int m);
    static ShadowedRicianParams from_b0_omega(double b0, double omega, int m);

    double k() const { return omega / (2.0 * b0); }
    double k_db() const;
    double k_sct() const { return 2.0 * b0; }
    double k_los() const { return omega / m; }
    double mean_power() const { return 2.0 * b0 + omega; }
    // E[a^4] - E[a^2]^2
    double power_variance() const { return 4.0 * b0 * b0 + 4.0 * b0 * omega + omega * omega / m; }
};

enum class VarianceConvention { paper, derived };

struct CorrelationProfile {
    double tau_e = 0.0;
    double rho_j = 1.0;
    double rho_z = 1.0;
    double rho_sr = 1.0;
    VarianceConvention convention = VarianceConvention::derived;
};

// Joint law of (t1, t2) = (beta1 a^2, beta2 a_hat^2): Gamma(gamma1, 1) and Gamma(gamma2, 1)
// marginals with correlation eta. a is the data-epoch envelope, a_hat the pilot-epoch one.
struct BivariateGammaShape {
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double eta = 0.0;
    double beta1 = 1.0;
    double beta2 = 1.0;
};

enum class GammaFitMethod { moments, mle };

struct GammaFit {
    double shape = 1.0;
    double rate = 1.0;
};

inline constexpr double kEtaMax = 1.0 - 1e-9;

double power_pdf(double x, const ShadowedRicianParams& p);
double power_cdf(double x, const ShadowedRicianParams& p);

double rho_z(double rho_j, int m);
double rho_sr(double rho_j, double rho_z, const ShadowedRicianParams& p, VarianceConvention conv);
CorrelationProfile correlation_profile(double tau_e, doppler::ResidualDoppler rd, const ShadowedRicianParams& p,
                                       VarianceConvention conv = VarianceConvention::derived);

GammaFit fit_marginal_gamma(const ShadowedRicianParams& p, GammaFitMethod method = GammaFitMethod::moments);
// CDF of the envelope sqrt(X) for X ~ Gamma(shape, rate).
double gamma_envelope_cdf(double r, const GammaFit& fit);
double gamma_power_cdf(double x, const GammaFit& fit);

// Equal-shape pipeline: eta = clamp(rho_sr, 0, kEtaMax).
BivariateGammaShape make_shape(const GammaFit& fit, double rho_sr);
BivariateGammaShape make_shape(const GammaFit& data, const GammaFit& pilot, double rho_sr);

double log_bivariate_gamma_pdf(double t1, double t2, const BivariateGammaShape& s);
double bivariate_gamma_pdf(double t1, double t2, const BivariateGammaShape& s);
double bivariate_envelope_pdf(double x, double y, const BivariateGammaShape& s);

// Joint CDF for equal shapes from the negative-binomial mixture of independent
// Gamma(gamma + k, 1 - eta) pairs. cdf[i][j] = P(t1 <= t1s[i], t2 <= t2s[j]).
std::vector<std::vector<double>> bivariate_gamma_cdf_grid(const std::vector<double>& t1s, const std::vector<double>& t2s,
                                                          const BivariateGammaShape& s);
double bivariate_gamma_cdf(double t1, double t2, const BivariateGammaShape& s);

struct ChannelPair {
    std::complex<double> data;   // h(t + tau_e)
    std::complex<double> pilot;  // h(t)
};

ChannelPair sample_correlated_pair(const ShadowedRicianParams& p, double rho_j, RandomStream& rng);

}  // namespace sagin::channel
