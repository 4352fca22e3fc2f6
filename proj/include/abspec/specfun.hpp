/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_SPECFUN_HPP
#define ABSPEC_SPECFUN_HPP

#include <cmath>
#include <cstdlib>

#include "core.hpp"

// Self-contained real gamma function and modified Bessel functions I_nu, K_nu
// of fractional order.  Orders are restricted to |nu| <= 5/2, the range
// reachable from the operator formulas; larger orders are rejected.
// K_nu uses a Temme-type series for x <= 2 and a Steed continued fraction for
// x > 2, with upward recurrence in the order.  I_nu uses its power series,
// which has no cancellation for x > 0, plus the reflection identity for
// negative orders.

namespace abspec::specfun {

namespace detail {

// Lanczos approximation, g = 7, 9 terms.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

inline double gamma_positive(double x) {
    // valid for x >= 0.5
    double a = lanczos_c[0];
    for (int k = 1; k < 9; ++k) a += lanczos_c[k] / (x - 1.0 + k);
    const double t = x + lanczos_g - 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, x - 0.5) * std::exp(-t) * a;
}

// Taylor coefficients of 1/Gamma(1+t).
inline constexpr double rg_d[8] = {
    1.0,
    0.57721566490153286,
    -0.65587807152025388,
    -0.042002635034095236,
    0.16653861138229149,
    -0.042197734555544337,
    -0.0096219715278769736,
    0.0072189432466630995,
};

} // namespace detail

/// Euler gamma function for real x, excluding the poles at x = 0, -1, -2, ...
inline double gamma(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
    if (x <= 0.0 && x == std::floor(x))
        throw PoleError("gamma: pole at non-positive integer");
    if (x >= 0.5) return detail::gamma_positive(x);
    // reflection
    return pi / (std::sin(pi * x) * detail::gamma_positive(1.0 - x));
}

namespace detail {

inline constexpr double bessel_eps = 1e-16;
inline constexpr int bessel_maxit = 20000;

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 = the mean; |mu| <= 1/2.
inline void temme_gammas(double mu, double& gam1, double& gam2) {
    if (std::abs(mu) < 5e-3) {
        const double m2 = mu * mu;
        gam1 = -(rg_d[1] + m2 * (rg_d[3] + m2 * (rg_d[5] + m2 * rg_d[7])));
        gam2 = rg_d[0] + m2 * (rg_d[2] + m2 * (rg_d[4] + m2 * rg_d[6]));
    } else {
        const double rp = 1.0 / specfun::gamma(1.0 + mu);
        const double rm = 1.0 / specfun::gamma(1.0 - mu);
        gam1 = (rm - rp) / (2.0 * mu);
        gam2 = 0.5 * (rm + rp);
    }
}

// K_mu(x), K_{mu+1}(x) by Temme's series; x <= 2, |mu| <= 1/2.
inline void k_temme(double mu, double x, double& kmu, double& kmu1) {
    const double x2 = 0.5 * x;
    const double mu2 = mu * mu;
    const double pimu = pi * mu;
    const double fact = std::abs(pimu) < bessel_eps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < bessel_eps ? 1.0 : std::sinh(e) / e;
    double gam1, gam2;
    temme_gammas(mu, gam1, gam2);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e * specfun::gamma(1.0 + mu);
    double q = 0.5 * specfun::gamma(1.0 - mu) / e;
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= bessel_maxit; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::abs(del) < std::abs(sum) * bessel_eps) break;
    }
    kmu = sum;
    kmu1 = sum1 * 2.0 / x;
}

// K_mu(x), K_{mu+1}(x) by Steed's continued fraction; x > 2, |mu| <= 1/2.
inline void k_steed(double mu, double x, double& kmu, double& kmu1) {
    const double a1 = 0.25 - mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= bessel_maxit; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < bessel_eps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

inline void check_args(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel: argument must be positive");
    if (!(std::abs(nu) <= 2.5 + 1e-12))
        throw DomainError("bessel: order restricted to |nu| <= 5/2");
    if (x > 700.0) throw DomainError("bessel: argument too large for double range");
}

inline double k_nonneg(double nu, double x) {
    const int n = static_cast<int>(nu + 0.5);
    const double mu = nu - n;
    double kmu, kmu1;
    if (x <= 2.0)
        k_temme(mu, x, kmu, kmu1);
    else
        k_steed(mu, x, kmu, kmu1);
    for (int i = 1; i < n; ++i) {
        const double knext = kmu + (2.0 * (mu + i) / x) * kmu1;
        kmu = kmu1;
        kmu1 = knext;
    }
    return n == 0 ? kmu : kmu1;
}

inline double i_series(double nu, double x) {
    // nu >= 0; all terms positive, no cancellation
    double term = std::pow(0.5 * x, nu) / specfun::gamma(nu + 1.0);
    double sum = term;
    const double q = 0.25 * x * x;
    for (int k = 1; k <= bessel_maxit; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (term < sum * bessel_eps) break;
    }
    return sum;
}

} // namespace detail

/// Modified Bessel function of the second kind K_nu(x); |nu| <= 5/2, x > 0.
inline double bessel_k(double nu, double x) {
    detail::check_args(nu, x);
    return detail::k_nonneg(std::abs(nu), x);
}

/// Modified Bessel function of the first kind I_nu(x); |nu| <= 5/2, x > 0.
inline double bessel_i(double nu, double x) {
    detail::check_args(nu, x);
    if (nu >= 0.0) return detail::i_series(nu, x);
    const double anu = -nu;
    return detail::i_series(anu, x) +
           (2.0 / pi) * std::sin(anu * pi) * detail::k_nonneg(anu, x);
}

} // namespace abspec::specfun

#endif
