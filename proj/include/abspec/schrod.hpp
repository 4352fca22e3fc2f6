/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_SCHROD_HPP
#define ABSPEC_SCHROD_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "core.hpp"
#include "radial.hpp"
#include "specfun.hpp"

// Half-line Schroedinger blocks with inverse-square potential
// (alpha+k)(alpha+k+1)/r^2: special solutions, short-distance constants,
// Green kernel, theta-family resolvent in the block k = 0, boundary-data
// algebra also for k = -1, bound state and zero-energy scattering length.
// The k = -1 family is supported through its boundary data and the Friedrichs
// resolvent only.

namespace abspec::schrod {

using radial::GridPtr;
using radial::RadialFn;

struct Params {
    double alpha; ///< flux parameter, in (-0.499, 0.499)
    double m;     ///< mass
    int k = 0;    ///< angular block index

    void validate() const {
        check_alpha(alpha);
        if (!(m > 0.0)) throw GapError("mass must be positive");
    }
};

namespace detail {
inline void require_shift(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("spectral shift must be positive");
}
inline void require_k0(const Params& p, const char* what) {
    if (p.k != 0) throw DomainError(std::string(what) + ": defined in the block k = 0 only");
}
inline void require_ext_block(const Params& p, const char* what) {
    if (p.k != 0 && p.k != -1)
        throw DomainError(std::string(what) + ": extension data exists for k in {-1, 0}");
}
} // namespace detail

/// Scalar solution of the shifted block equation; decaying (K-type) or
/// growing (I-type).
class Solution {
public:
    Solution(double order, double kappa, bool decaying)
        : order_(order), kappa_(kappa), decaying_(decaying) {}

    double operator()(double r) const {
        if (!(r > 0.0)) throw DomainError("solution: r must be positive");
        const double z = kappa_ * r;
        return decaying_ ? std::sqrt(r) * specfun::bessel_k(order_, z)
                         : std::sqrt(r) * specfun::bessel_i(order_, z);
    }

    double decay_rate() const { return kappa_; }

private:
    double order_, kappa_;
    bool decaying_;
};

inline double kappa(const Params& p, double lambda) {
    p.validate();
    detail::require_shift(lambda);
    return std::sqrt(2.0 * p.m * lambda);
}

inline Solution decaying_solution(const Params& p, double lambda) {
    return Solution(p.alpha + p.k + 0.5, kappa(p, lambda), true);
}

inline Solution growing_solution(const Params& p, double lambda) {
    return Solution(p.alpha + p.k + 0.5, kappa(p, lambda), false);
}

/// Short-distance constants: decaying ~ A r^{-(alpha+k)} + B r^{1+alpha+k},
/// growing ~ C r^{1+alpha+k}.
struct AsymptoticConstants {
    double A, B, C;
};

inline AsymptoticConstants asymptotic_constants(const Params& p, double lambda) {
    p.validate();
    detail::require_shift(lambda);
    const double s = p.alpha + p.k;
    const double ml = p.m * lambda;
    AsymptoticConstants out;
    out.A = std::pow(2.0, 0.5 * s - 0.75) * std::pow(ml, -0.5 * s - 0.25) *
            specfun::gamma(s + 0.5);
    out.B = std::pow(2.0, -0.5 * s - 1.25) * std::pow(ml, 0.5 * s + 0.25) *
            specfun::gamma(-s - 0.5);
    out.C = std::pow(2.0, -0.5 * s - 0.25) * std::pow(ml, 0.5 * s + 0.25) /
            specfun::gamma(s + 1.5);
    return out;
}

/// Squared L^2 norm of the decaying solution by quadrature over [r0, rmax]
/// with the analytic small-r head added from the asymptotic constants.
inline double decaying_norm_sq(const Params& p, double lambda) {
    detail::require_ext_block(p, "decaying_norm_sq");
    const double kap = kappa(p, lambda);
    const double r0 = std::min(1e-6, 1e-3 / kap);
    const double rmax = 46.0 / kap;
    const auto grid = radial::RadialGrid::gauss_panels(r0, rmax, 4, 10);
    const auto phi = decaying_solution(p, lambda);
    double acc = 0.0;
    const auto& w = grid->weights();
    for (int i = 0; i < grid->n(); ++i) {
        const double v = phi(grid->r(i));
        acc += w[i] * v * v;
    }
    const auto ac = asymptotic_constants(p, lambda);
    // truncated head from |A r^{-s} + B r^{1+s}|^2; for k = -1 the B part is
    // the singular one
    const double s = p.alpha + p.k;
    acc += ac.A * ac.A * std::pow(r0, 1.0 - 2.0 * s) / (1.0 - 2.0 * s) +
           ac.A * ac.B * r0 * r0 +
           ac.B * ac.B * std::pow(r0, 3.0 + 2.0 * s) / (3.0 + 2.0 * s);
    return acc;
}

namespace detail {
inline double tau_denominator(const Params& p, double lambda, double theta) {
    const double t1 = pi / std::cos(pi * p.alpha);
    const double t2 = std::pow(2.0, 0.5 + p.alpha) * std::pow(p.m * lambda, -0.5 - p.alpha) *
                      specfun::gamma(0.5 + p.alpha) * specfun::gamma(1.5 + p.alpha) * theta;
    return t1 + t2;
}
} // namespace detail

/// Rank-one prefactor of the theta-family resolvent in the block k = 0.
inline double tau(const Params& p, double lambda, const ExtParam& theta) {
    detail::require_k0(p, "tau");
    p.validate();
    detail::require_shift(lambda);
    if (theta.is_inf()) return 0.0;
    const double d = detail::tau_denominator(p, lambda, theta.value());
    const double t1 = pi / std::cos(pi * p.alpha);
    const double scale = t1 + std::abs(d - t1);
    if (std::abs(d) < 1e-12 * scale)
        throw PoleError("tau: shift sits on the bound state for this theta");
    return 2.0 / d;
}

/// Symmetric scalar Green kernel of the Friedrichs resolvent.
class GreenKernel {
public:
    GreenKernel(Solution phi, Solution f, double m)
        : phi_(std::move(phi)), f_(std::move(f)), two_m_(2.0 * m) {}

    double operator()(double r, double rho) const {
        return two_m_ * phi_(std::max(r, rho)) * f_(std::min(r, rho));
    }

private:
    Solution phi_, f_;
    double two_m_;
};

inline GreenKernel green_kernel(const Params& p, double lambda) {
    return GreenKernel(decaying_solution(p, lambda), growing_solution(p, lambda), p.m);
}

/// Differential action (1/2m)(-f'' + (alpha+k)(alpha+k+1) f / r^2).
inline RadialFn apply(const Params& p, const RadialFn& f) {
    p.validate();
    f.check();
    const double s = p.alpha + p.k;
    const double pot = s * (s + 1.0);
    const RadialFn d2 = radial::diff(f, 2);
    const int n = f.grid->n();
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        const double r = f.grid->r(i);
        out[i] = (-d2.v[i] + pot / (r * r) * f.v[i]) / (2.0 * p.m);
    }
    return RadialFn(f.grid, std::move(out));
}

/// Resolvent at shift lambda: theta family for k = 0, Friedrichs for k = -1.
inline RadialFn resolvent(const Params& p, double lambda, const ExtParam& theta,
                          const RadialFn& g) {
    p.validate();
    g.check();
    double t = 0.0;
    if (p.k == 0) {
        t = tau(p, lambda, theta);
    } else if (p.k == -1) {
        if (!theta.is_inf())
            throw DomainError("resolvent: block k = -1 supports the Friedrichs extension only");
    } else {
        throw DomainError("resolvent: defined for k in {-1, 0}");
    }
    const auto phi = decaying_solution(p, lambda);
    const auto fgrow = growing_solution(p, lambda);
    const int n = g.grid->n();
    std::vector<double> phv(n), fv(n);
    std::vector<cplx> fg(n), pg(n);
    for (int i = 0; i < n; ++i) {
        const double r = g.grid->r(i);
        phv[i] = phi(r);
        fv[i] = fgrow(r);
        fg[i] = fv[i] * g.v[i];
        pg[i] = phv[i] * g.v[i];
    }
    const auto pre_f = radial::cum_prefix(*g.grid, fg);
    const auto suf_p = radial::cum_suffix(*g.grid, pg);
    const cplx total_p = suf_p[0]; // integral over the full grid range
    std::vector<cplx> u(n);
    for (int i = 0; i < n; ++i) {
        const cplx kern = 2.0 * p.m * (phv[i] * pre_f[i] + fv[i] * suf_p[i]);
        u[i] = kern + 2.0 * p.m * t * total_p * phv[i];
    }
    return RadialFn(g.grid, std::move(u));
}

/// Bound-state energy E < 0 of the theta extension; absent for theta >= 0.
inline std::optional<double> bound_state(const Params& p, const ExtParam& theta) {
    detail::require_k0(p, "bound_state");
    p.validate();
    if (theta.is_inf() || theta.value() >= 0.0) return std::nullopt;
    const double th = theta.value();
    const double scale = th * th / (2.0 * p.m);
    double la = 1e-8 * scale, lb = 1e4 * scale;
    auto den = [&](double lam) { return detail::tau_denominator(p, lam, th); };
    double fa = den(la);
    if (fa > 0.0) throw MissingEigenvalue("bound_state: bracket scan failed at lower end");
    double fb = den(lb);
    if (fb < 0.0) throw MissingEigenvalue("bound_state: bracket scan failed at upper end");
    // single sign change: denominator is monotone in the shift
    while ((lb - la) > 1e-13 * lb) {
        const double mid = std::sqrt(la * lb);
        const double fm = den(mid);
        if (fm == 0.0) {
            la = lb = mid;
            break;
        }
        if (fa * fm < 0.0) {
            lb = mid;
        } else {
            la = mid;
            fa = fm;
        }
    }
    return -0.5 * (la + lb);
}

/// First node of the zero-energy solution r^{-alpha} + theta r^{1+alpha}.
inline double scattering_length(const Params& p, double theta) {
    detail::require_k0(p, "scattering_length");
    p.validate();
    if (!(theta < 0.0))
        throw DomainError("scattering_length: theta must be negative");
    return std::pow(-theta, -1.0 / (1.0 + 2.0 * p.alpha));
}

/// Leading/subleading short-distance coefficients: (a0, a1) for k = 0,
/// (b0, b1) for k = -1.
struct BoundaryData {
    cplx lead;
    cplx sublead;
};

inline BoundaryData boundary_from_coeffs(const Params& p, double lambda, cplx c0, cplx c1) {
    detail::require_ext_block(p, "boundary_from_coeffs");
    const auto ac = asymptotic_constants(p, lambda);
    const double nsq = decaying_norm_sq(p, lambda);
    return {c0 * ac.A, c0 * ac.B + c1 * 2.0 * p.m * ac.C * nsq};
}

/// Relabelling between the Birman parameter omega and the boundary-condition
/// slope (theta for k = 0, nu for k = -1).
inline ExtParam theta_from_omega(const Params& p, double lambda, const ExtParam& omega) {
    detail::require_ext_block(p, "theta_from_omega");
    if (omega.is_inf()) return ExtParam::inf();
    const auto ac = asymptotic_constants(p, lambda);
    const double nsq = decaying_norm_sq(p, lambda);
    return ExtParam::finite((ac.B + 2.0 * p.m * omega.value() * ac.C * nsq) / ac.A);
}

inline ExtParam omega_from_theta(const Params& p, double lambda, const ExtParam& theta) {
    detail::require_ext_block(p, "omega_from_theta");
    if (theta.is_inf()) return ExtParam::inf();
    const auto ac = asymptotic_constants(p, lambda);
    const double nsq = decaying_norm_sq(p, lambda);
    return ExtParam::finite((theta.value() * ac.A - ac.B) / (2.0 * p.m * ac.C * nsq));
}

/// Windowed least-squares extraction of (lead, sublead) from samples.  The
/// fit carries a third basis member r^{2-s}, the curvature of the leading
/// branch, which sits between the boundary powers and would otherwise bias
/// the subleading coefficient at the percent level.
inline BoundaryData fit_boundary_data(const Params& p, const RadialFn& u, double rlo = 1e-4,
                                      double rhi = 1e-3) {
    detail::require_ext_block(p, "fit_boundary_data");
    u.check();
    const double s = p.alpha + p.k;
    const double e[3] = {-s, 1.0 + s, 2.0 - s};
    double g[3][3] = {};
    cplx rhs[3] = {};
    int cnt = 0;
    for (int i = 0; i < u.grid->n(); ++i) {
        const double r = u.grid->r(i);
        if (r < rlo || r > rhi) continue;
        const double b[3] = {std::pow(r, e[0]), std::pow(r, e[1]), std::pow(r, e[2])};
        for (int a = 0; a < 3; ++a) {
            for (int q = 0; q < 3; ++q) g[a][q] += b[a] * b[q];
            rhs[a] += b[a] * u.v[i];
        }
        ++cnt;
    }
    if (cnt < 4) throw GridError("fit_boundary_data: window contains fewer than 4 nodes");
    // solve the 3x3 normal equations by elimination
    cplx x[3] = {rhs[0], rhs[1], rhs[2]};
    double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = g[i][j];
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
        std::swap(a[col], a[piv]);
        std::swap(x[col], x[piv]);
        for (int row = col + 1; row < 3; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int j = col; j < 3; ++j) a[row][j] -= f * a[col][j];
            x[row] -= f * x[col];
        }
    }
    for (int col = 2; col >= 0; --col) {
        for (int j = col + 1; j < 3; ++j) x[col] -= a[col][j] * x[j];
        x[col] /= a[col][col];
    }
    return {x[0], x[1]};
}

} // namespace abspec::schrod

#endif
