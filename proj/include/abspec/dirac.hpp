/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_DIRAC_HPP
#define ABSPEC_DIRAC_HPP

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"
#include "radial.hpp"
#include "specfun.hpp"

// Half-line Dirac blocks with Aharonov-Bohm flux: special solutions of the
// shifted eigenvalue equation, short-distance constants, Green kernel,
// gamma-family resolvent, boundary-coefficient algebra, gap eigenvalue,
// zero-energy scattering length, and the boundary map of the squared blocks.
// The extension family lives in the block k = 0; apply() works for any k.

namespace abspec::dirac {

using radial::GridPtr;
using radial::RadialFn;
using radial::RadialSpinor;

struct Params {
    double alpha; ///< flux parameter, in (-0.499, 0.499)
    double m;     ///< mass
    double c;     ///< light speed
    int k = 0;    ///< angular block index

    void validate() const {
        check_alpha(alpha);
        if (!(m > 0.0)) throw GapError("mass must be positive");
        if (!(c > 0.0)) throw GapError("light speed must be positive");
    }
};

namespace detail {
inline void require_k0(const Params& p, const char* what) {
    if (p.k != 0) throw DomainError(std::string(what) + ": defined in the block k = 0 only");
}
} // namespace detail

/// mu = sqrt(2 m c^2 - lambda) / c for a spectral shift inside the gap.
inline double mu(const Params& p, double lambda) {
    p.validate();
    const double gap = 2.0 * p.m * p.c * p.c;
    if (!(lambda > 0.0 && lambda < gap))
        throw GapError("spectral shift must lie in (0, 2 m c^2)");
    return std::sqrt(gap - lambda) / p.c;
}

/// Two-component solution of the shifted block equation, either the decaying
/// one (K-type, square-integrable) or the growing one (I-type).
class Solution {
public:
    Solution(double alpha, double kappa, double up_mag, bool decaying)
        : alpha_(alpha), kappa_(kappa), up_mag_(up_mag), decaying_(decaying) {}

    std::array<cplx, 2> operator()(double r) const {
        if (!(r > 0.0)) throw DomainError("solution: r must be positive");
        const double z = kappa_ * r;
        const double sq = std::sqrt(r);
        if (decaying_) {
            return {-iu * (up_mag_ * sq * specfun::bessel_k(alpha_ + 0.5, z)),
                    cplx(sq * specfun::bessel_k(alpha_ - 0.5, z))};
        }
        return {iu * (up_mag_ * sq * specfun::bessel_i(alpha_ + 0.5, z)),
                cplx(sq * specfun::bessel_i(alpha_ - 0.5, z))};
    }

    double decay_rate() const { return kappa_; }

private:
    double alpha_, kappa_, up_mag_;
    bool decaying_;
};

inline Solution decaying_solution(const Params& p, double lambda) {
    detail::require_k0(p, "decaying_solution");
    const double m_ = mu(p, lambda);
    return Solution(p.alpha, m_ * std::sqrt(lambda), p.c * m_ / std::sqrt(lambda), true);
}

inline Solution growing_solution(const Params& p, double lambda) {
    detail::require_k0(p, "growing_solution");
    const double m_ = mu(p, lambda);
    return Solution(p.alpha, m_ * std::sqrt(lambda), p.c * m_ / std::sqrt(lambda), false);
}

/// Short-distance constants: decaying solution ~ A r^{-alpha} e1 + B r^{alpha} e2,
/// growing solution ~ C r^{alpha} e2.
struct AsymptoticConstants {
    cplx A;
    double B;
    double C;
    double iA; ///< the real positive number i*A
};

inline AsymptoticConstants asymptotic_constants(const Params& p, double lambda) {
    detail::require_k0(p, "asymptotic_constants");
    const double m_ = mu(p, lambda);
    const double kappa = m_ * std::sqrt(lambda);
    const double a = std::pow(2.0, p.alpha - 0.5) * (p.c * m_ / std::sqrt(lambda)) *
                     std::pow(kappa, -0.5 - p.alpha) * specfun::gamma(0.5 + p.alpha);
    AsymptoticConstants out;
    out.iA = a;
    out.A = -iu * a;
    out.B = std::pow(2.0, -0.5 - p.alpha) * std::pow(kappa, p.alpha - 0.5) *
            specfun::gamma(0.5 - p.alpha);
    out.C = std::pow(2.0, 0.5 - p.alpha) * std::pow(kappa, p.alpha - 0.5) /
            specfun::gamma(0.5 + p.alpha);
    return out;
}

/// Closed-form squared L^2 norm of the decaying solution.
inline double decaying_norm_sq(const Params& p, double lambda) {
    detail::require_k0(p, "decaying_norm_sq");
    const double m_ = mu(p, lambda);
    const double cosa = std::cos(pi * p.alpha);
    return pi * (1.0 + 2.0 * p.alpha) * p.c * p.c / (4.0 * lambda * lambda * cosa) +
           pi * (1.0 - 2.0 * p.alpha) / (4.0 * lambda * m_ * m_ * cosa);
}

namespace detail {
/// Denominator of the rank-one prefactor for finite gamma.
inline double tau_denominator(const Params& p, double lambda, double gamma) {
    const double m_ = mu(p, lambda);
    const double kappa = m_ * std::sqrt(lambda);
    const double ghalf = specfun::gamma(0.5 + p.alpha);
    const double t1 = pi / std::cos(pi * p.alpha);
    const double t2 = std::pow(4.0, p.alpha) * m_ * m_ *
                      std::pow(kappa, -1.0 - 2.0 * p.alpha) * ghalf * ghalf * p.c * gamma;
    return t1 + t2;
}
} // namespace detail

/// Rank-one prefactor of the gamma-family resolvent; 0 for gamma = inf.
inline double tau(const Params& p, double lambda, const ExtParam& gamma) {
    detail::require_k0(p, "tau");
    mu(p, lambda); // gap check
    if (gamma.is_inf()) return 0.0;
    const double d = detail::tau_denominator(p, lambda, gamma.value());
    const double scale = pi / std::cos(pi * p.alpha) + std::abs(d - pi / std::cos(pi * p.alpha));
    if (std::abs(d) < 1e-12 * scale)
        throw PoleError("tau: shift sits on the gap eigenvalue for this gamma");
    return 2.0 / d;
}

using Mat2 = std::array<std::array<cplx, 2>, 2>;

/// Green kernel of the distinguished (Friedrichs-type) resolvent as a
/// pointwise evaluator of 2x2 matrices.  On the diagonal the two one-sided
/// limits are averaged.
class GreenKernel {
public:
    GreenKernel(Solution phi, Solution f, double factor)
        : phi_(std::move(phi)), f_(std::move(f)), factor_(factor) {}

    Mat2 operator()(double r, double rho) const {
        const auto a = phi_(std::max(r, rho));
        const auto b = f_(std::min(r, rho));
        Mat2 out{};
        if (r != rho) {
            const bool lower = rho < r; // rho on the decaying side of r
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    out[i][j] = factor_ * (lower ? a[i] * std::conj(b[j]) : b[i] * std::conj(a[j]));
        } else {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    out[i][j] = 0.5 * factor_ *
                                (a[i] * std::conj(b[j]) + b[i] * std::conj(a[j]));
        }
        return out;
    }

private:
    Solution phi_, f_;
    double factor_;
};

inline GreenKernel green_kernel(const Params& p, double lambda) {
    detail::require_k0(p, "green_kernel");
    return GreenKernel(decaying_solution(p, lambda), growing_solution(p, lambda),
                       -lambda / (p.c * p.c));
}

/// Differential action of the block operator on sampled spinors.
inline RadialSpinor apply(const Params& p, const RadialSpinor& f) {
    p.validate();
    f.check();
    const double a = p.alpha + p.k;
    const double mc2 = p.m * p.c * p.c;
    const RadialFn dup = radial::diff(RadialFn(f.grid, f.up), 1);
    const RadialFn ddn = radial::diff(RadialFn(f.grid, f.dn), 1);
    const int n = f.grid->n();
    std::vector<cplx> u(n), d(n);
    for (int i = 0; i < n; ++i) {
        const double r = f.grid->r(i);
        u[i] = mc2 * f.up[i] + iu * p.c * (-ddn.v[i] + (a / r) * f.dn[i]);
        d[i] = -iu * p.c * (dup.v[i] + (a / r) * f.up[i]) - mc2 * f.dn[i];
    }
    return RadialSpinor(f.grid, std::move(u), std::move(d));
}

/// Resolvent of the gamma-extension at shift lambda applied to g:
/// kernel part plus the rank-one correction.
inline RadialSpinor resolvent(const Params& p, double lambda, const ExtParam& gamma,
                              const RadialSpinor& g) {
    detail::require_k0(p, "resolvent");
    g.check();
    const double t = tau(p, lambda, gamma);
    const auto phi = decaying_solution(p, lambda);
    const auto fgrow = growing_solution(p, lambda);
    const int n = g.grid->n();

    std::vector<std::array<cplx, 2>> phv(n), fv(n);
    std::vector<cplx> fg(n), pg(n);
    for (int i = 0; i < n; ++i) {
        const double r = g.grid->r(i);
        phv[i] = phi(r);
        fv[i] = fgrow(r);
        fg[i] = std::conj(fv[i][0]) * g.up[i] + std::conj(fv[i][1]) * g.dn[i];
        pg[i] = std::conj(phv[i][0]) * g.up[i] + std::conj(phv[i][1]) * g.dn[i];
    }
    const auto pre_f = radial::cum_prefix(*g.grid, fg);
    const auto suf_p = radial::cum_suffix(*g.grid, pg);
    const cplx total_p = suf_p[0]; // integral over the full grid range
    const double fac = lambda / (p.c * p.c);

    std::vector<cplx> u(n), d(n);
    for (int i = 0; i < n; ++i) {
        const cplx kern_u = -fac * (phv[i][0] * pre_f[i] + fv[i][0] * suf_p[i]);
        const cplx kern_d = -fac * (phv[i][1] * pre_f[i] + fv[i][1] * suf_p[i]);
        u[i] = kern_u + t * fac * total_p * phv[i][0];
        d[i] = kern_d + t * fac * total_p * phv[i][1];
    }
    return RadialSpinor(g.grid, std::move(u), std::move(d));
}

/// Unique zero of the prefactor denominator in the gap, if any.
/// Bracket scan over 256 log-spaced shifts, then bisection to 1e-12 relative.
inline std::optional<double> gap_eigenvalue(const Params& p, const ExtParam& gamma) {
    detail::require_k0(p, "gap_eigenvalue");
    p.validate();
    if (gamma.is_inf()) return std::nullopt;
    const double g = gamma.value();
    const double gap = 2.0 * p.m * p.c * p.c;
    const double lo = gap * 1e-12, hi = gap * (1.0 - 1e-9);
    const int nprobe = 256;
    auto den = [&](double lam) { return detail::tau_denominator(p, lam, g); };
    double la = lo, fa = den(la);
    double lb = 0.0, fb = 0.0;
    bool found = false;
    for (int i = 1; i < nprobe; ++i) {
        lb = lo * std::pow(hi / lo, static_cast<double>(i) / (nprobe - 1));
        fb = den(lb);
        if (fa == 0.0) return la;
        if (fa * fb < 0.0) {
            found = true;
            break;
        }
        la = lb;
        fa = fb;
    }
    if (!found) return std::nullopt;
    while ((lb - la) > 1e-12 * lb) {
        const double mid = std::sqrt(la * lb);
        const double fm = den(mid);
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0) {
            lb = mid;
        } else {
            la = mid;
            fa = fm;
        }
    }
    return 0.5 * (la + lb);
}

/// First node of the zero-energy upper component; attractive case only.
inline double scattering_length(const Params& p, double gamma) {
    detail::require_k0(p, "scattering_length");
    p.validate();
    if (!(gamma < 0.0))
        throw DomainError("scattering_length: gamma must be negative");
    const double q = 1.0 + 2.0 * p.alpha;
    return std::pow(-q / (2.0 * p.m * p.c * gamma), 1.0 / q);
}

/// Zero-energy solution respecting the gamma boundary condition.
class ZeroEnergySolution {
public:
    ZeroEnergySolution(double alpha, double gamma, double coef)
        : alpha_(alpha), gamma_(gamma), coef_(coef) {}

    std::array<cplx, 2> operator()(double r) const {
        if (!(r > 0.0)) throw DomainError("zero-energy solution: r must be positive");
        return {cplx(std::pow(r, -alpha_) + coef_ * std::pow(r, alpha_ + 1.0)),
                -iu * (gamma_ * std::pow(r, alpha_))};
    }

private:
    double alpha_, gamma_, coef_;
};

inline ZeroEnergySolution zero_energy_solution(const Params& p, double gamma) {
    detail::require_k0(p, "zero_energy_solution");
    p.validate();
    return ZeroEnergySolution(p.alpha, gamma,
                              2.0 * p.m * p.c * gamma / (2.0 * p.alpha + 1.0));
}

/// Extension-parameter relabelling between the Birman parameter beta and gamma.
inline ExtParam beta_to_gamma(const Params& p, double lambda, const ExtParam& beta) {
    detail::require_k0(p, "beta_to_gamma");
    if (beta.is_inf()) return ExtParam::inf();
    const auto ac = asymptotic_constants(p, lambda);
    const double nsq = decaying_norm_sq(p, lambda);
    const double fac = lambda / (p.c * p.c);
    return ExtParam::finite((beta.value() * fac * ac.C * nsq - ac.B) / ac.iA);
}

inline ExtParam gamma_to_beta(const Params& p, double lambda, const ExtParam& gamma) {
    detail::require_k0(p, "gamma_to_beta");
    if (gamma.is_inf()) return ExtParam::inf();
    const auto ac = asymptotic_constants(p, lambda);
    const double nsq = decaying_norm_sq(p, lambda);
    const double fac = lambda / (p.c * p.c);
    return ExtParam::finite((ac.iA * gamma.value() + ac.B) / (fac * ac.C * nsq));
}

/// Leading/subleading short-distance coefficients of the two components.
struct BoundaryData {
    cplx g0; ///< coefficient of r^{-alpha} in the upper component
    cplx g1; ///< coefficient of r^{alpha} in the lower component
};

inline BoundaryData boundary_from_coeffs(const Params& p, double lambda, cplx c0, cplx c1) {
    detail::require_k0(p, "boundary_from_coeffs");
    const auto ac = asymptotic_constants(p, lambda);
    const double nsq = decaying_norm_sq(p, lambda);
    const double fac = lambda / (p.c * p.c);
    return {c0 * ac.A, c0 * ac.B - c1 * fac * ac.C * nsq};
}

/// Boundary data of the squared block: given the free pair (a0, b1), the
/// constrained pair (b0, a1).  gamma = inf admits only the reduced data.
inline std::pair<cplx, cplx> square_boundary_map(const Params& p, const ExtParam& gamma,
                                                 cplx a0, cplx b1) {
    detail::require_k0(p, "square_boundary_map");
    p.validate();
    if (gamma.is_inf()) {
        if (a0 != cplx(0.0) || b1 != cplx(0.0))
            throw SupersymmetryError(
                "square_boundary_map: gamma = inf forces a0 = 0 and b1 = 0");
        return {cplx(0.0), cplx(0.0)};
    }
    const double g = gamma.value();
    const cplx b0 = -iu * g * a0;
    const cplx a1 =
        -iu * g * (2.0 * iu * a0 * p.m * p.c + (1.0 - 2.0 * p.alpha) * b1) /
        (2.0 * p.alpha + 1.0);
    return {b0, a1};
}

/// Windowed two-term least-squares extraction of the boundary data from a
/// sampled spinor: up ~ g0 r^{-alpha} + * r^{1+alpha}, dn ~ g1 r^{alpha} + * r^{1-alpha}.
inline BoundaryData fit_boundary_data(const Params& p, const RadialSpinor& u,
                                      double rlo = 1e-4, double rhi = 1e-3) {
    detail::require_k0(p, "fit_boundary_data");
    u.check();
    auto fit2 = [&](const std::vector<cplx>& vals, double e1, double e2) {
        double s11 = 0, s12 = 0, s22 = 0;
        cplx r1 = 0, r2 = 0;
        int cnt = 0;
        for (int i = 0; i < u.grid->n(); ++i) {
            const double r = u.grid->r(i);
            if (r < rlo || r > rhi) continue;
            const double b1 = std::pow(r, e1), b2 = std::pow(r, e2);
            s11 += b1 * b1;
            s12 += b1 * b2;
            s22 += b2 * b2;
            r1 += b1 * vals[i];
            r2 += b2 * vals[i];
            ++cnt;
        }
        if (cnt < 4) throw GridError("fit_boundary_data: window contains fewer than 4 nodes");
        const double det = s11 * s22 - s12 * s12;
        return (s22 * r1 - s12 * r2) / det;
    };
    BoundaryData out;
    out.g0 = fit2(u.up, -p.alpha, 1.0 + p.alpha);
    out.g1 = fit2(u.dn, p.alpha, 1.0 - p.alpha);
    return out;
}

} // namespace abspec::dirac

#endif
