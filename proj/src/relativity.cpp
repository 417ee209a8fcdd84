// SPDX-License-Identifier: Apache-2.0
#include "sagin/relativity.hpp"

#include <cmath>
#include <vector>

#include "sagin/errors.hpp"
#include "sagin/specfun.hpp"

namespace sagin::relativity {

namespace {

void check_regime(double r, double theta_pol, double v, const RelativisticConstants& k) {
    const double c2 = k.c * k.c;
    const double g = 2.0 * (potential(r, theta_pol, k) / c2 - k.phi0_over_c2);
    if (std::abs(g) + v * v / c2 >= 1e-6)
        throw DomainError("proper_time_rate: outside the weak-field regime");
}

// Integrals of the parabola through three samples over [x0, x1] and [x1, x2].
struct SimpsonPair {
    double left = 0.0;
    double right = 0.0;
};

SimpsonPair simpson_parts(double x0, double x1, double x2, double f0, double f1, double f2) {
    const double h0 = x1 - x0;
    const double h1 = x2 - x1;
    const double hs = h0 + h1;
    const double l = h0 * (f0 * (2.0 * h0 + 3.0 * h1) / (6.0 * hs) + f1 * (h0 + 3.0 * h1) / (6.0 * h1) -
                           f2 * h0 * h0 / (6.0 * h1 * hs));
    const double r = h1 * (-f0 * h1 * h1 / (6.0 * h0 * hs) + f1 * (3.0 * h0 + h1) / (6.0 * h0) +
                           f2 * (3.0 * h0 + 2.0 * h1) / (6.0 * hs));
    return {l, r};
}

}  // namespace

double special_offset(double T, double v, const RelativisticConstants& k) {
    if (T < 0.0) throw DomainError("special_offset: window must be >= 0");
    if (!(v >= 0.0 && v < k.c)) throw DomainError("special_offset: speed must be in [0, c)");
    const double beta2 = (v / k.c) * (v / k.c);
    return -T * std::expm1(0.5 * std::log1p(-beta2));
}

double potential(double r, double theta_pol, const RelativisticConstants& k) {
    if (!(r > 0.0)) throw DomainError("potential: radius must be positive");
    const double ratio = k.R_eq / r;  // R / (R + H) with H = r - R
    return -k.GM_E / r * (1.0 - k.J2 * ratio * ratio * specfun::legendre_p2(std::cos(theta_pol)));
}

double rate_deviation(double r, double theta_pol, double v, const RelativisticConstants& k) {
    check_regime(r, theta_pol, v, k);
    const double c2 = k.c * k.c;
    return (potential(r, theta_pol, k) / c2 - k.phi0_over_c2) - 0.5 * v * v / c2;
}

double proper_time_rate(double r, double theta_pol, double v, const RelativisticConstants& k) {
    return 1.0 + rate_deviation(r, theta_pol, v, k);
}

double proper_time_rate_sqrt(double r, double theta_pol, double v, const RelativisticConstants& k) {
    check_regime(r, theta_pol, v, k);
    const double c2 = k.c * k.c;
    return std::sqrt(1.0 + 2.0 * (potential(r, theta_pol, k) / c2 - k.phi0_over_c2) - v * v / c2);
}

double accumulated_offset(std::span<const PathSample> path, const RelativisticConstants& k) {
    if (path.size() < 3) throw DomainError("accumulated_offset: need at least 3 samples");
    std::vector<double> f(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) {
            const double dt = path[i].t - path[i - 1].t;
            if (!(dt > 0.0)) throw DomainError("accumulated_offset: samples must be strictly time-ordered");
            if (dt > 1.0 + 1e-12) throw DomainError("accumulated_offset: sample spacing exceeds 1 s");
        }
        f[i] = rate_deviation(path[i].r, path[i].theta_pol, path[i].v, k);
    }
    const std::size_t n = path.size() - 1;  // intervals
    double integral = 0.0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const auto p = simpson_parts(path[i].t, path[i + 1].t, path[i + 2].t, f[i], f[i + 1], f[i + 2]);
        integral += p.left + p.right;
    }
    if (i < n) {
        const auto p = simpson_parts(path[n - 2].t, path[n - 1].t, path[n].t, f[n - 2], f[n - 1], f[n]);
        integral += p.right;
    }
    // T - integral of (1 + deviation) dt
    return -integral;
}

}  // namespace sagin::relativity
