/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_TESTS_SUPPORT_HPP
#define ABSPEC_TESTS_SUPPORT_HPP

// Test-side oracles, independent of the library paths they check.

#include <cmath>
#include <random>

#include "abspec/abspec.hpp"

namespace oracle {

// Modified Bessel K by its integral representation,
//   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt,
// evaluated in long double with the trapezoid rule (the integrand is even in
// t, so the rule converges spectrally).
inline long double bessel_k(long double nu, long double x) {
    const long double h = 0.01L;
    long double acc = 0.5L * std::exp(-x); // t = 0 term
    for (int i = 1;; ++i) {
        const long double t = h * i;
        const long double e = x * std::cosh(t);
        if (e > 11000.0L) break;
        acc += std::exp(-e) * std::cosh(nu * t);
    }
    return acc * h;
}

// Modified Bessel I via
//   I_nu(x) = (1/pi) int_0^pi exp(x cos t) cos(nu t) dt
//             - sin(nu pi)/pi int_0^inf exp(-x cosh u - nu u) du.
// The first integrand is entire, so a large Gauss rule resolves it to
// rounding; the trapezoid rule would be limited by its t = pi boundary term.
inline long double bessel_i(long double nu, long double x) {
    const long double pi_l = 3.14159265358979323846264338327950288L;
    static const auto rule = [] {
        std::vector<double> gx, gw;
        abspec::radial::detail::gauss_legendre(400, gx, gw);
        return std::make_pair(gx, gw);
    }();
    long double first = 0.0L;
    for (size_t q = 0; q < rule.first.size(); ++q) {
        const long double t = 0.5L * pi_l * (1.0L + static_cast<long double>(rule.first[q]));
        first += 0.5L * pi_l * static_cast<long double>(rule.second[q]) *
                 std::exp(x * std::cos(t)) * std::cos(nu * t);
    }
    first /= pi_l;
    // second integrand is not even at u = 0; correct the trapezoid boundary
    // term (Euler-Maclaurin) with f'(0) = -nu in units of f(0)
    const long double h2 = 0.002L;
    long double second = 0.5L; // u = 0 term of exp(-x cosh u - nu u)/exp(-x)
    for (int i = 1;; ++i) {
        const long double u = h2 * i;
        const long double e = x * std::cosh(u) + nu * u - x;
        if (e > 11000.0L) break;
        second += std::exp(-e);
    }
    long double tail = second * h2 - h2 * h2 * nu / 12.0L;
    tail *= std::exp(-x) * std::sin(nu * pi_l) / pi_l;
    return first - tail;
}

inline long double gamma(long double x) { return std::tgammal(x); }

// Central finite difference of a callable, independent of the library stencils.
template <class F>
double diff5(F&& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

} // namespace oracle

namespace testutil {

using namespace abspec;

inline double logbump(double r, double a, double b) {
    return radial::bump(std::log(r), std::log(a), std::log(b));
}

/// Interior-window L2 residual of the Dirac resolvent identity, relative to
/// the data norm.  Window fractions exclude the grid edges where the 1/r
/// coefficients amplify finite-difference noise.
inline double dirac_residual(double alpha, double m, double c, double lambda,
                             const ExtParam& gamma, int n, double rmin = 1e-6) {
    dirac::Params p{alpha, m, c, 0};
    const double rate = dirac::mu(p, lambda) * std::sqrt(lambda);
    auto grid = radial::RadialGrid::log_uniform(rmin, 60.0 / rate, n);
    auto data = radial::sample_spinor(grid, [](double r) {
        return std::array<cplx, 2>{cplx(logbump(r, 0.04, 10.0)),
                                   cplx(0.5 * logbump(r, 0.08, 6.0))};
    });
    auto u = dirac::resolvent(p, lambda, gamma, data);
    auto hu = dirac::apply(p, u);
    const double shift = m * c * c - lambda;
    auto [i0, i1] = grid->interior_span(0.2, 0.1);
    const auto& w = grid->weights();
    double rn = 0, gn = 0;
    for (int i = i0; i < i1; ++i) {
        const cplx ru = hu.up[i] - shift * u.up[i] - data.up[i];
        const cplx rd = hu.dn[i] - shift * u.dn[i] - data.dn[i];
        rn += w[i] * (std::norm(ru) + std::norm(rd));
        gn += w[i] * (std::norm(data.up[i]) + std::norm(data.dn[i]));
    }
    return std::sqrt(rn / gn);
}

inline double schrod_residual(double alpha, double m, double lambda, const ExtParam& theta,
                              int n, int k = 0) {
    schrod::Params p{alpha, m, k};
    const double rate = std::sqrt(2.0 * m * lambda);
    auto grid = radial::RadialGrid::log_uniform(1e-6, 60.0 / rate, n);
    auto data = radial::sample(grid, [](double r) { return logbump(r, 0.4, 3.0); });
    auto u = schrod::resolvent(p, lambda, theta, data);
    auto su = schrod::apply(p, u);
    auto [i0, i1] = grid->interior_span(0.55, 0.12);
    const auto& w = grid->weights();
    double rn = 0, gn = 0;
    for (int i = i0; i < i1; ++i) {
        const cplx rr = su.v[i] + lambda * u.v[i] - data.v[i];
        rn += w[i] * std::norm(rr);
        gn += w[i] * std::norm(data.v[i]);
    }
    return std::sqrt(rn / gn);
}

/// Quadrature oracle for the squared norm of the Dirac decaying solution:
/// Gauss panels in log r plus the analytic small-r head.
inline double dirac_norm_quad(const dirac::Params& p, double lambda) {
    const auto phi = dirac::decaying_solution(p, lambda);
    const double kap = phi.decay_rate();
    const double r0 = std::min(1e-6, 1e-3 / kap);
    auto grid = radial::RadialGrid::gauss_panels(r0, 46.0 / kap, 4, 10);
    double acc = 0.0;
    const auto& w = grid->weights();
    for (int i = 0; i < grid->n(); ++i) {
        const auto v = phi(grid->r(i));
        acc += w[i] * (std::norm(v[0]) + std::norm(v[1]));
    }
    const auto ac = dirac::asymptotic_constants(p, lambda);
    const double a2 = std::norm(ac.A), b2 = ac.B * ac.B;
    acc += a2 * std::pow(r0, 1.0 - 2 * p.alpha) / (1.0 - 2 * p.alpha) +
           b2 * std::pow(r0, 1.0 + 2 * p.alpha) / (1.0 + 2 * p.alpha);
    return acc;
}

struct Lcg {
    uint64_t s = 0x9e3779b97f4a7c15ull;
    double uniform() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>((s >> 11) & ((1ull << 53) - 1)) / (1ull << 53);
    }
    double sym() { return 2.0 * uniform() - 1.0; }
};

} // namespace testutil

#endif
