// SPDX-License-Identifier: Apache-2.0
#include "sagin/ber.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <thread>
#include <utility>
#include <vector>

#include "sagin/errors.hpp"
#include "sagin/random.hpp"
#include "sagin/specfun.hpp"

namespace sagin::ber {

using channel::BivariateGammaShape;
using specfun::kPi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Q(num / sigma) with the sigma -> 0 limit.
double q_over(double num, double sigma) {
    if (sigma == 0.0) return num > 0.0 ? 0.0 : (num < 0.0 ? 1.0 : 0.5);
    return specfun::gaussian_q(num / sigma);
}

// Angular kernel Xi(theta, f) for gamma1 <= gamma2: the k-series whose Craig-weighted sum over
// f = 1 + u gives the polar-coordinate form of E[Q(s r)]. Evaluated in logs with Euler's
// transformation applied to 2F1(S/2, (S+1)/2; gamma2 + k; x), S = gamma1 + gamma2 + k.
class AngularKernel {
public:
    AngularKernel(const BivariateGammaShape& s, SeriesControl ctl) : g1_(s.gamma1), g2_(s.gamma2), eta_(s.eta), ctl_(ctl) {
        const double d = g2_ - g1_;
        log_c_.reserve(ctl_.k_max + 1);
        double log_poch = 0.0;
        for (int k = 0; k <= ctl_.k_max; ++k) {
            if (k > 0) {
                if (d + k - 1.0 == 0.0) break;
                log_poch += std::log(d + k - 1.0);
            }
            const double lk = (k == 0) ? 0.0 : k * std::log(eta_);
            log_c_.push_back(std::log(4.0) + g2_ * std::log1p(-eta_) + lk + log_poch - std::lgamma(k + 1.0) -
                             std::lgamma(g1_) + std::lgamma(g1_ + g2_ + k) - (g2_ + k) * std::log(2.0) -
                             std::lgamma(g2_ + k));
        }
    }

    // u = f - 1 >= 0
    double operator()(double theta, double u) const {
        const double s2 = std::sin(2.0 * theta);
        const double c2 = std::cos(2.0 * theta);
        const double lf = std::log1p(u);
        // f^2 - eta sin^2(2 theta) as a sum of nonnegative parts
        const double gap = u * (2.0 + u) + (1.0 - eta_) + eta_ * c2 * c2;
        const double x = eta_ * s2 * s2 / ((1.0 + u) * (1.0 + u));
        const double common = 2.0 * g1_ * std::log(std::cos(theta)) + (g1_ + 1.0) * lf - (g1_ + 0.5) * std::log(gap);
        const double lt = std::log(std::tan(theta));
        const double ls = std::log(s2);
        const double d = g2_ - g1_;

        double log_max = kNegInf;
        double sum = 0.0;
        double prev = kNegInf;
        int growth = 0;
        for (std::size_t k = 0; k < log_c_.size(); ++k) {
            const double kk = static_cast<double>(k);
            const double hyp = specfun::gauss_2f1(0.5 * (d + kk), 0.5 * (d + kk - 1.0), g2_ + kk, x);
            const double term = log_c_[k] + (g2_ + kk) * lt + (g2_ + kk - 1.0) * ls - (g2_ + kk) * lf + std::log(hyp);
            if (term > log_max) {
                sum = sum * std::exp(log_max - term) + 1.0;
                log_max = term;
            } else {
                sum += std::exp(term - log_max);
            }
            growth = term > prev ? growth + 1 : 0;
            if (growth >= 50) throw NumericError("upsilon: k-series terms grew for 50 consecutive k");
            if (k > 0 && term < prev && term - log_max - std::log(sum) < std::log(ctl_.rel_tol)) break;
            prev = term;
        }
        return std::exp(common + log_max + std::log(sum));
    }

private:
    double g1_, g2_, eta_;
    SeriesControl ctl_;
    std::vector<double> log_c_;
};

}  // namespace

QamLink QamLink::from_snr(double snr, double a_p) {
    if (!(snr > 0.0) || !(a_p > 0.0)) throw DomainError("QamLink: snr and a_p must be positive");
    QamLink l;
    l.d = std::sqrt(a_p / 10.0);
    l.sigma_n = std::sqrt(a_p / snr / 2.0);
    return l;
}

QamLink QamLink::from_snr_db(double snr_db, double a_p) { return from_snr(std::pow(10.0, snr_db / 10.0), a_p); }

int decide_level(double r, double threshold) {
    if (r < 0.0) return r < -threshold ? 0 : 1;
    return r < threshold ? 2 : 3;
}

double conditional_ber_16qam(double alpha, double alpha_hat, const QamLink& link) {
    if (!(alpha >= 0.0) || !(alpha_hat >= 0.0)) throw DomainError("conditional_ber_16qam: amplitudes must be >= 0");
    const double d = link.d;
    const double s = link.sigma_n;
    return 0.25 * (q_over(3 * d * alpha, s) + q_over(d * alpha, s) + q_over(3 * d * alpha - 2 * d * alpha_hat, s) -
                   q_over(3 * d * alpha + 2 * d * alpha_hat, s) + q_over(-d * alpha + 2 * d * alpha_hat, s) +
                   q_over(d * alpha + 2 * d * alpha_hat, s));
}

double awgn_ber_16qam(const QamLink& link) {
    const double r = link.d / link.sigma_n;
    return 0.25 * (3 * specfun::gaussian_q(r) + 2 * specfun::gaussian_q(3 * r) - specfun::gaussian_q(5 * r));
}

double upsilon(double z, double zeta, const BivariateGammaShape& shape_in, int Q, SeriesControl ctl) {
    if (Q < 1) throw DomainError("upsilon: Q must be >= 1");
    BivariateGammaShape s = shape_in;
    if (!(s.gamma1 > 0 && s.gamma2 > 0 && s.beta1 > 0 && s.beta2 > 0)) throw DomainError("upsilon: invalid shape");
    if (!(s.eta >= 0.0 && s.eta < 1.0)) throw DomainError("upsilon: eta must lie in [0, 1)");
    // the series needs gamma1 <= gamma2; swapping the envelopes swaps (z, zeta)
    if (s.gamma1 > s.gamma2) {
        std::swap(s.gamma1, s.gamma2);
        std::swap(s.beta1, s.beta2);
        std::swap(z, zeta);
    }
    const AngularKernel xi(s, ctl);
    const auto rule = specfun::chebyshev_rule(Q);
    std::vector<double> kappa_sin2(Q), nu(Q), w(Q);
    for (int i = 0; i < Q; ++i) {
        const double t = rule.nodes[i];
        w[i] = rule.weights[i] * std::sqrt(1.0 - t * t);
        const double sk = std::sin(0.25 * kPi * (t + 1.0));
        kappa_sin2[i] = 2.0 * sk * sk;
        nu[i] = 0.25 * w[i];
    }

    // theta(omega) = pi/4 + atan(lambda tan omega) / 2 spreads nodes over the width-sqrt(1-eta) ridge
    const double lam = std::sqrt(1.0 - s.eta);
    const double a = z / std::sqrt(s.beta1);
    const double b = zeta / std::sqrt(s.beta2);
    std::vector<std::pair<double, double>> pieces{{-0.5 * kPi, 0.5 * kPi}};
    if (a * b < 0.0) {
        const double th = std::atan(-a / b);
        const double om = std::atan(std::tan(2.0 * th - 0.5 * kPi) / lam);
        pieces = {{-0.5 * kPi, om}, {om, 0.5 * kPi}};
    }

    double total = 0.0;
    for (const auto& [lo, hi] : pieces) {
        for (int j = 0; j < Q; ++j) {
            const double om = lo + 0.5 * (hi - lo) * (rule.nodes[j] + 1.0);
            const double co = std::cos(om);
            const double so = std::sin(om);
            const double theta = 0.25 * kPi + 0.5 * std::atan(lam * std::tan(om));
            const double jac = 0.5 * lam / (co * co + lam * lam * so * so);
            const double sv = lam * (a * std::cos(theta) + b * std::sin(theta));
            double craig = 0.0;
            for (int i = 0; i < Q; ++i) craig += nu[i] * xi(theta, sv * sv / kappa_sin2[i]);
            const double val = sv >= 0.0 ? craig : xi(theta, 0.0) - craig;
            total += 0.5 * (hi - lo) * w[j] * jac * val;
        }
    }
    return total;
}

double average_ber_closed_form(const QamLink& link, const BivariateGammaShape& shape, int Q, SeriesControl ctl) {
    const double r = link.d / link.sigma_n;
    auto U = [&](double z, double zeta) { return upsilon(z, zeta, shape, Q, ctl); };
    const double ber = 0.25 * (U(3 * r, 0) + U(r, 0) + U(3 * r, -2 * r) - U(3 * r, 2 * r) + U(-r, 2 * r) + U(r, 2 * r));
    return std::clamp(ber, 0.0, 0.5);
}

double wilson_halfwidth(std::uint64_t errors, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(errors) / nn;
    return z / (1.0 + z * z / nn) * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
}

namespace {

constexpr double kLevels[4] = {-3.0, -1.0, 1.0, 3.0};

unsigned bit_errors(int sent, int got) { return static_cast<unsigned>(std::popcount(kGrayBits[sent] ^ kGrayBits[got])); }

std::uint64_t run_trials(const channel::ShadowedRicianParams& p, double rho_j, const QamLink& link, std::uint64_t first,
                         std::uint64_t last, std::uint64_t seed, McMode mode) {
    std::uint64_t errs = 0;
    const double d = link.d;
    for (std::uint64_t t = first; t < last; ++t) {
        RandomStream rng(seed, t);
        const auto h = channel::sample_correlated_pair(p, rho_j, rng);
        const std::uint64_t sym = rng.next_u64();
        const int li = static_cast<int>(sym & 3u);
        const int lq = static_cast<int>((sym >> 2) & 3u);
        const double ni = link.sigma_n * rng.normal();
        const double nq = link.sigma_n * rng.normal();
        if (mode == McMode::amplitude_model) {
            const double a = std::abs(h.data);
            const double ah = std::abs(h.pilot);
            const double thr = 2.0 * d * ah;
            errs += bit_errors(li, decide_level(a * kLevels[li] * d + ni, thr));
            errs += bit_errors(lq, decide_level(a * kLevels[lq] * d + nq, thr));
        } else {
            const std::complex<double> s(kLevels[li] * d, kLevels[lq] * d);
            const std::complex<double> y = h.data * s + std::complex<double>(ni, nq);
            const std::complex<double> eq = y / h.pilot;
            errs += bit_errors(li, decide_level(eq.real(), 2.0 * d));
            errs += bit_errors(lq, decide_level(eq.imag(), 2.0 * d));
        }
    }
    return errs;
}

}  // namespace

McResult monte_carlo_ber(const channel::ShadowedRicianParams& params, double rho_j, const QamLink& link,
                         std::uint64_t n_trials, std::uint64_t seed, McMode mode, unsigned threads) {
    if (n_trials == 0) throw DomainError("monte_carlo_ber: n_trials must be positive");
    if (!(link.sigma_n >= 0.0) || !(link.d > 0.0)) throw DomainError("monte_carlo_ber: invalid link");
    constexpr std::uint64_t kChunk = 1 << 14;
    const std::uint64_t n_chunks = (n_trials + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> per_chunk(n_chunks, 0);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++)
            per_chunk[c] = run_trials(params, rho_j, link, c * kChunk, std::min(n_trials, (c + 1) * kChunk), seed, mode);
    };
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    pool.clear();

    McResult r;
    r.n_trials = n_trials;
    r.bits = 4 * n_trials;
    for (auto e : per_chunk) r.bit_errors += e;
    r.ber = static_cast<double>(r.bit_errors) / static_cast<double>(r.bits);
    r.halfwidth = wilson_halfwidth(r.bit_errors, r.bits);
    return r;
}

}  // namespace sagin::ber
