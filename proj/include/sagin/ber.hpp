// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "sagin/channel.hpp"

namespace sagin::ber {

// Square 16-QAM with per-axis levels {-3d, -d, d, 3d} and per-dimension noise deviation sigma_n.
struct QamLink {
    double d = 1.0;
    double sigma_n = 1.0;

    // 10 d^2 = a_p, sigma_n = sigma / sqrt(2) with sigma^2 = a_p / snr.
    static QamLink from_snr(double snr, double a_p = 1.0);
    static QamLink from_snr_db(double snr_db, double a_p = 1.0);
    double snr() const { return 5.0 * d * d / (sigma_n * sigma_n); }
};

// Gray map per axis: level index 0..3 (-3d..3d) <-> bits 00, 01, 11, 10.
inline constexpr std::array<unsigned, 4> kGrayBits{0b00, 0b01, 0b11, 0b10};

// Level index for a received per-axis value against thresholds 0 and +-threshold.
int decide_level(double r, double threshold);

double conditional_ber_16qam(double alpha, double alpha_hat, const QamLink& link);
double awgn_ber_16qam(const QamLink& link);

struct SeriesControl {
    double rel_tol = 1e-12;
    int k_max = 500;
};

// E[Q(z alpha + zeta alpha_hat)] over the bivariate Gamma joint law, Q-point Chebyshev-Gauss.
double upsilon(double z, double zeta, const channel::BivariateGammaShape& shape, int Q, SeriesControl ctl = {});

double average_ber_closed_form(const QamLink& link, const channel::BivariateGammaShape& shape, int Q,
                               SeriesControl ctl = {});

enum class McMode { amplitude_model, full_complex };

struct McResult {
    double ber = 0.0;
    double halfwidth = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t n_trials = 0;
};

// Wilson score interval half-width at 95%.
double wilson_halfwidth(std::uint64_t errors, std::uint64_t n);

// Trial i draws from RandomStream(seed, i), so the result does not depend on `threads`.
McResult monte_carlo_ber(const channel::ShadowedRicianParams& params, double rho_j, const QamLink& link,
                         std::uint64_t n_trials, std::uint64_t seed, McMode mode = McMode::amplitude_model,
                         unsigned threads = 0);

}  // namespace sagin::ber
