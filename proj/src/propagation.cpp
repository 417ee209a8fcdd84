// SPDX-License-Identifier: Apache-2.0
#include "sagin/propagation.hpp"

#include <cmath>
#include <string>

#include "sagin/errors.hpp"
#include "sagin/specfun.hpp"

namespace sagin::propagation {

using specfun::kPi;

double refractive_index(double h, const LinkGeometry& g) {
    if (h < 0.0) throw DomainError("refractive_index: altitude must be >= 0");
    return 1.0 + g.N0_prime * std::exp(-h / g.h0);
}

double refracted_path_length(const LinkGeometry& g) {
    if (!(g.H > 0.0)) throw DomainError("refracted_path_length: altitude must be positive");
    if (!(g.theta0 > 0.0 && g.theta0 <= kPi / 2)) throw DomainError("refracted_path_length: elevation outside (0, pi/2]");
    const auto rule = specfun::chebyshev_rule(g.Q);
    const double n0 = refractive_index(0.0, g);
    const double n0c = n0 * std::cos(g.theta0);
    double sum = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double t = rule.nodes[i];
        const double kappa = 0.5 * g.H * (t + 1.0);
        const double n = refractive_index(kappa, g);
        const double ratio = n0c / (n * (1.0 + kappa / g.R));
        const double arg = 1.0 - ratio * ratio;
        if (!(arg > 0.0))
            throw DomainError("refracted_path_length: grazing ray, singular at node " + std::to_string(i + 1) +
                              " (altitude " + std::to_string(kappa) + " m)");
        sum += 0.5 * g.H * rule.weights[i] * n * std::sqrt(1.0 - t * t) / std::sqrt(arg);
    }
    return sum;
}

double straight_slant_range(double H, double theta0, double R) {
    const double c = R * std::cos(theta0);
    return std::sqrt((R + H) * (R + H) - c * c) - R * std::sin(theta0);
}

double path_loss(double f_c, double d, double alpha_pl) {
    if (!(d > 0.0) || !(f_c > 0.0)) throw DomainError("path_loss: distance and frequency must be positive");
    const double lambda_term = kSpeedOfLight / (4.0 * kPi * f_c);
    return lambda_term * lambda_term * std::pow(d, -alpha_pl);
}

double transmittance(const AbsorptionSpec& spec) {
    double total = 0.0;
    for (const auto& [gas, tau] : spec.taus) {
        if (!(tau >= 0.0)) throw DomainError("transmittance: negative optical thickness for '" + gas + "'");
        total += tau;
    }
    return std::exp(-total);
}

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

LinkBudget received_power_gain(const LinkGeometry& g, const AbsorptionSpec& spec, double P_s_watts,
                               double noise_watts) {
    if (!(P_s_watts > 0.0)) throw DomainError("received_power_gain: transmit power must be positive");
    if (!(noise_watts > 0.0)) throw DomainError("received_power_gain: noise power must be positive");
    LinkBudget lb;
    lb.a_p = P_s_watts * path_loss(g.f_c, refracted_path_length(g), g.alpha_pl) * transmittance(spec);
    lb.mean_snr = lb.a_p / noise_watts;
    return lb;
}

}  // namespace sagin::propagation
