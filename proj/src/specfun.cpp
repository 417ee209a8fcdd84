// SPDX-License-Identifier: Apache-2.0
#include "sagin/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "sagin/errors.hpp"

namespace sagin::specfun {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double x, const char* fn) {
    if (!std::isfinite(x)) throw DomainError(std::string(fn) + ": non-finite argument");
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

// ln|Gamma(x)| together with the sign of Gamma(x).
struct SignedLog {
    double log = 0.0;
    int sign = 1;  // 0 encodes an exact zero
};

SignedLog lgamma_signed(double x) {
    int s = 1;
    const double l = ::lgamma_r(x, &s);
    return {l, s};
}

// 1/Gamma(x) in signed log form; zero at the poles of Gamma.
SignedLog rgamma_signed(double x) {
    if (is_nonpositive_integer(x)) return {0.0, 0};
    const SignedLog g = lgamma_signed(x);
    return {-g.log, g.sign};
}

SignedLog mul(SignedLog a, SignedLog b) { return {a.log + b.log, a.sign * b.sign}; }

double to_double(SignedLog v) { return v.sign == 0 ? 0.0 : v.sign * std::exp(v.log); }

constexpr double kSeriesTol = 1e-14;
constexpr int kSeriesMax = 10000;

double hyp_series(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < kSeriesMax; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (term == 0.0 || std::abs(term) < kSeriesTol * std::abs(sum)) break;
    }
    return sum;
}

// c - a - b = n exactly, n >= 0 integer, w = 1 - z small.
double hyp_log_case(double a, double b, int n, double w) {
    const double lw = std::log(w);
    if (n == 0) {
        const double pre = to_double(mul(lgamma_signed(a + b), mul(rgamma_signed(a), rgamma_signed(b))));
        double sum = 0.0;
        double coef = 1.0;
        for (int k = 0; k < kSeriesMax; ++k) {
            const double bracket = 2.0 * digamma(k + 1.0) - digamma(a + k) - digamma(b + k) - lw;
            const double term = coef * bracket;
            sum += term;
            if (k > 2 && std::abs(term) < kSeriesTol * std::abs(sum)) break;
            coef *= (a + k) * (b + k) / ((k + 1.0) * (k + 1.0)) * w;
        }
        return pre * sum;
    }
    const double c = a + b + n;
    double finite = 0.0;
    {
        double coef = 1.0;
        for (int k = 0; k < n; ++k) {
            finite += coef;
            coef *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - n + k)) * w;
        }
        const SignedLog pre = mul(mul(lgamma_signed(n), lgamma_signed(c)),
                                  mul(rgamma_signed(a + n), rgamma_signed(b + n)));
        finite *= to_double(pre);
    }
    const SignedLog pre2 = mul(lgamma_signed(c), mul(rgamma_signed(a), rgamma_signed(b)));
    if (pre2.sign == 0) return finite;
    double tail = 0.0;
    double coef = std::exp(n * lw - std::lgamma(n + 1.0));
    for (int k = 0; k < kSeriesMax; ++k) {
        const double bracket = lw - digamma(k + 1.0) - digamma(k + n + 1.0) + digamma(a + k + n) +
                               digamma(b + k + n);
        const double term = coef * bracket;
        tail += term;
        if (k > 2 && std::abs(term) < kSeriesTol * std::abs(tail)) break;
        coef *= (a + n + k) * (b + n + k) / ((k + 1.0) * (k + n + 1.0)) * w;
    }
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    return finite - sgn * to_double(pre2) * tail;
}

// Debye polynomials v_k(t) = u_k(t) / t^k, k = 1..7, coefficients in powers of t^2.
constexpr std::array<std::array<double, 8>, 7> kDebye = {{
    {1.0 / 8, -5.0 / 24},
    {9.0 / 128, -77.0 / 192, 385.0 / 1152},
    {75.0 / 1024, -4563.0 / 5120, 17017.0 / 9216, -85085.0 / 82944},
    {3675.0 / 32768, -96833.0 / 40960, 144001.0 / 16384, -7436429.0 / 663552, 37182145.0 / 7962624},
    {59535.0 / 262144, -67608983.0 / 9175040, 250881631.0 / 5898240, -108313205.0 / 1179648,
     5391411025.0 / 63700992, -5391411025.0 / 191102976},
    {2401245.0 / 4194304, -388895895.0 / 14680064, 1441372804469.0 / 6606028800,
     -33010308331.0 / 47185920, 4445922195.0 / 4194304, -1169936192425.0 / 1528823808,
     5849680962125.0 / 27518828544},
    {57972915.0 / 33554432, -25388505925.0 / 234881024, 1007390378503.0 / 838860800,
     -1602251736839.0 / 301989888, 10559432785187.0 / 905969664, -36927006432745.0 / 2717908992,
     1774793203908725.0 / 220150628352, -1267709431363375.0 / 660451885056},
}};

double log_bessel_i_series(double nu, double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    double log_scale = 0.0;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (term < 1e-17 * sum) break;
        if (sum > 1e280) {
            log_scale += std::log(sum);
            term /= sum;
            sum = 1.0;
        }
    }
    return nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) + log_scale + std::log(sum);
}

double log_bessel_i_debye(double nu, double x) {
    const double s = std::hypot(nu, x);
    const double t = nu / s;
    const double t2 = t * t;
    double sum = 1.0;
    double sp = 1.0;
    for (const auto& poly : kDebye) {
        sp *= s;
        double v = 0.0;
        for (int j = static_cast<int>(poly.size()) - 1; j >= 0; --j) v = v * t2 + poly[j];
        sum += v / sp;
    }
    return s + nu * std::log(x / (nu + s)) - 0.5 * std::log(2.0 * kPi * s) + std::log(sum);
}

double j0_series(double x) {
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

// Miller backward recurrence normalized by J0 + 2 sum J_{2k} = 1.
double j0_miller(double x) {
    int n = 2 * static_cast<int>((x + 20.0 + 2.0 * std::sqrt(10.0 * x)) / 2.0);
    double jp1 = 0.0;
    double j = 1e-30;
    double norm = 0.0;
    double j0 = 0.0;
    for (int k = n; k > 0; --k) {
        const double jm1 = 2.0 * k / x * j - jp1;
        jp1 = j;
        j = jm1;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 = j;
    norm += j0;
    return j0 / norm;
}

// Hankel asymptotic expansion, |x| >= 25.
double j0_hankel(double x) {
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    const double e = 8.0 * x;
    double prev = kInf;
    for (int k = 1; k < 120; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -odd * odd / (k * e);
        if (std::abs(term) > prev) break;
        prev = std::abs(term);
        // term = a_k(0) / x^k with alternating-pair signs folded below
        const int r = k % 4;
        if (r == 1) q += term;
        else if (r == 2) p -= term;
        else if (r == 3) q -= term;
        else p += term;
        if (std::abs(term) < 1e-17) break;
    }
    // cos(x - pi/4) and sin(x - pi/4) without subtracting from a large x
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double cchi = (c + s) / std::sqrt(2.0);
    const double schi = (s - c) / std::sqrt(2.0);
    return std::sqrt(2.0 / (kPi * x)) * (p * cchi - q * schi);
}

}  // namespace

QuadratureRule chebyshev_rule(int q) {
    if (q < 1) throw DomainError("chebyshev_rule: order must be >= 1");
    QuadratureRule rule;
    rule.order = q;
    rule.nodes.resize(q);
    rule.weights.assign(q, kPi / q);
    for (int i = 1; i <= q; ++i) rule.nodes[i - 1] = std::cos((2.0 * i - 1.0) * kPi / (2.0 * q));
    if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
    return rule;
}

double bessel_j0(double x) {
    require_finite(x, "bessel_j0");
    x = std::abs(x);
    if (x < 8.0) return j0_series(x);
    if (x < 25.0) return j0_miller(x);
    return j0_hankel(x);
}

double log_bessel_i(double nu, double x) {
    require_finite(nu, "log_bessel_i");
    require_finite(x, "log_bessel_i");
    if (x < 0.0) throw DomainError("bessel_i: x must be >= 0");
    if (nu <= -1.0) throw DomainError("bessel_i: order must be > -1");
    if (x == 0.0) return nu == 0.0 ? 0.0 : (nu > 0.0 ? -kInf : kInf);
    if (x < 30.0 + std::abs(nu)) return log_bessel_i_series(nu, x);
    // for -1 < nu < 0, I_nu - I_{-nu} = (2/pi) sin(-nu pi) K_{-nu} is O(e^{-2x}) relative here
    return log_bessel_i_debye(std::abs(nu), x);
}

double bessel_i(double nu, double x) { return std::exp(log_bessel_i(nu, x)); }

double ln_gamma(double x) {
    require_finite(x, "ln_gamma");
    if (x <= 0.0) throw DomainError("ln_gamma: x must be > 0");
    int sign = 1;
    return ::lgamma_r(x, &sign);
}

double digamma(double x) {
    require_finite(x, "digamma");
    if (is_nonpositive_integer(x)) throw DomainError("digamma: pole at non-positive integer");
    double acc = 0.0;
    if (x < 0.0) {
        // reflection: psi(x) = psi(1 - x) - pi cot(pi x)
        acc -= kPi / std::tan(kPi * x);
        x = 1.0 - x;
    }
    while (x < 14.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    const double series =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132)))));
    return acc + std::log(x) - 0.5 / x - series;
}

double pochhammer(double a, int k) {
    if (k < 0) throw DomainError("pochhammer: k must be >= 0");
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= a + i;
    return p;
}

double gauss_2f1(double a, double b, double c, double z) {
    require_finite(a, "gauss_2f1");
    require_finite(b, "gauss_2f1");
    require_finite(c, "gauss_2f1");
    require_finite(z, "gauss_2f1");
    if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a non-positive integer");
    if (z < 0.0 || z > 1.0) throw DomainError("gauss_2f1: z outside [0, 1]");
    if (z == 0.0) return 1.0;
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return hyp_series(a, b, c, z);

    const double s = c - a - b;
    if (z == 1.0) {
        if (s <= 0.0) throw DomainError("gauss_2f1: divergent at z = 1 (c - a - b <= 0)");
        const SignedLog v = mul(mul(lgamma_signed(c), lgamma_signed(s)),
                                mul(rgamma_signed(c - a), rgamma_signed(c - b)));
        return to_double(v);
    }
    if (z <= 0.95) return hyp_series(a, b, c, z);

    const double w = 1.0 - z;
    const double n = std::nearbyint(s);
    if (std::abs(s - n) < 1e-12 * std::max(1.0, std::abs(s))) {
        if (n >= 0.0) return hyp_log_case(a, b, static_cast<int>(n), w);
        // Euler: (1-z)^s F(c-a, c-b; c; z), whose c-a-b is -s > 0
        return std::pow(w, s) * hyp_log_case(c - a, c - b, static_cast<int>(-n), w);
    }
    const SignedLog g_c = lgamma_signed(c);
    const SignedLog pa = mul(mul(g_c, lgamma_signed(s)), mul(rgamma_signed(c - a), rgamma_signed(c - b)));
    const SignedLog pb = mul(mul(g_c, lgamma_signed(-s)), mul(rgamma_signed(a), rgamma_signed(b)));
    const double t1 = pa.sign == 0 ? 0.0 : to_double(pa) * hyp_series(a, b, 1.0 - s, w);
    const double t2 = pb.sign == 0 ? 0.0 : to_double(pb) * std::pow(w, s) * hyp_series(c - a, c - b, 1.0 + s, w);
    return t1 + t2;
}

double ellip_e(double e) {
    require_finite(e, "ellip_e");
    if (e < 0.0 || e > 1.0) throw DomainError("ellip_e: modulus outside [0, 1]");
    if (e == 1.0) return 1.0;
    double a = 1.0;
    double g = std::sqrt((1.0 - e) * (1.0 + e));
    double c = e;
    double sum = 0.5 * c * c;
    double pow2 = 0.5;
    for (int i = 0; i < 64 && std::abs(c) > 1e-17; ++i) {
        const double an = 0.5 * (a + g);
        const double gn = std::sqrt(a * g);
        c = 0.5 * (a - g);
        a = an;
        g = gn;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    return kPi / (2.0 * a) * (1.0 - sum);
}

double gaussian_q(double x) {
    require_finite(x, "gaussian_q");
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double legendre_p2(double x) {
    require_finite(x, "legendre_p2");
    return 0.5 * (3.0 * x * x - 1.0);
}

}  // namespace sagin::specfun
