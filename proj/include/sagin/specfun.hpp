// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

namespace sagin::specfun {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Chebyshev-Gauss rule of the first kind on [-1, 1].
// nodes[i-1] = cos((2i-1)pi/(2Q)), weights[i-1] = pi/Q.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    // Sum of w_i sqrt(1 - t_i^2) f(t_i), i.e. an approximation of the plain
    // integral of f over [-1, 1].
    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (int i = 0; i < order; ++i) {
            const double t = nodes[i];
            acc += weights[i] * std::sqrt(1.0 - t * t) * f(t);
        }
        return acc;
    }
};

QuadratureRule chebyshev_rule(int q);

double bessel_j0(double x);

// Modified Bessel function of the first kind, real order nu > -1.
double bessel_i(double nu, double x);
// ln I_nu(x); -inf for x == 0 and nu > 0.
double log_bessel_i(double nu, double x);

double ln_gamma(double x);
double digamma(double x);
// Rising factorial (a)_k as a plain product.
double pochhammer(double a, int k);

// Gauss hypergeometric 2F1(a, b; c; z) for z in [0, 1].
double gauss_2f1(double a, double b, double c, double z);

// Complete elliptic integral of the second kind with modulus e.
double ellip_e(double e);

double gaussian_q(double x);
double legendre_p2(double x);

}  // namespace sagin::specfun
