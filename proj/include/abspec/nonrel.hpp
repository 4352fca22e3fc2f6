/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_NONREL_HPP
#define ABSPEC_NONREL_HPP

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <type_traits>
#include <vector>

#include "core.hpp"
#include "dirac.hpp"
#include "radial.hpp"
#include "schrod.hpp"

// Certification of the non-relativistic limit: the gamma(c) schedule that
// preserves the scattering length, prefactor convergence, rank-one kernel
// convergence, discretized resolvent-difference operator norms, gap-eigenvalue
// convergence, and the positron-side prefactor convergence through the
// (-alpha, 1/gamma) equivalence.

namespace abspec::nonrel {

struct ConvergenceRow {
    double c;
    double metric;
    bool has_slope = false;
    double slope = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;

    double first() const { return rows.front().metric; }
    double final() const { return rows.back().metric; }

    void to_csv(std::ostream& os) const {
        os << "c,metric,slope\n";
        char buf[96];
        for (const auto& r : rows) {
            if (r.has_slope)
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.c, r.metric, r.slope);
            else
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,\n", r.c, r.metric);
            os << buf;
        }
    }
};

namespace detail {
inline ConvergenceTable make_table(const std::vector<double>& cs,
                                   const std::vector<double>& metrics) {
    ConvergenceTable t;
    t.rows.resize(cs.size());
    for (size_t i = 0; i < cs.size(); ++i) {
        t.rows[i] = {cs[i], metrics[i], false, 0.0};
        if (i > 0 && metrics[i] > 0.0 && metrics[i - 1] > 0.0) {
            t.rows[i].has_slope = true;
            t.rows[i].slope =
                std::log(metrics[i] / metrics[i - 1]) / std::log(cs[i] / cs[i - 1]);
        }
    }
    return t;
}
} // namespace detail

/// Default light-speed sweep: two decades in half-decade steps plus 1e4.
inline std::vector<double> default_c_sweep() {
    return {10.0, 31.6, 100.0, 316.0, 1000.0, 3162.0, 10000.0};
}

/// Extension-parameter schedule gamma(c) = theta (1+2 alpha) / (2 m c).
inline ExtParam gamma_schedule(const ExtParam& theta, double alpha, double m, double c) {
    check_alpha(alpha);
    if (!(m > 0.0 && c > 0.0)) throw GapError("gamma_schedule: m and c must be positive");
    if (theta.is_inf()) return ExtParam::inf();
    return ExtParam::finite(theta.value() * (1.0 + 2.0 * alpha) / (2.0 * m * c));
}

/// Reciprocal schedule used on the positron side: with
/// gamma(c) = 2 m c / ((1-2 alpha) theta), this is 1/gamma(c).
inline ExtParam positron_inverse_schedule(const ExtParam& theta, double alpha, double m,
                                          double c) {
    check_alpha(alpha);
    if (!(m > 0.0 && c > 0.0)) throw GapError("positron schedule: m and c must be positive");
    if (theta.is_inf()) return ExtParam::inf();
    if (theta.value() == 0.0)
        throw DomainError("positron schedule: theta must be nonzero");
    return ExtParam::finite((1.0 - 2.0 * alpha) * theta.value() / (2.0 * m * c));
}

/// Sweep description for the limit drivers.
struct LimitRun {
    ExtParam theta;
    double alpha = 0.0;
    double m = 1.0;
    double lambda = 1.0;
    std::vector<double> c_values = default_c_sweep();
    radial::GridPtr grid; ///< quadrature grid for the discretized-operator metric

    void validate() const {
        check_alpha(alpha);
        if (!(m > 0.0)) throw GapError("LimitRun: mass must be positive");
        if (!(lambda > 0.0)) throw GapError("LimitRun: lambda must be positive");
        if (c_values.size() < 4) throw DomainError("LimitRun: need at least 4 c values");
        for (size_t i = 0; i < c_values.size(); ++i) {
            if (!(c_values[i] > 0.0)) throw DomainError("LimitRun: c values must be positive");
            if (i > 0 && !(c_values[i] > c_values[i - 1]))
                throw DomainError("LimitRun: c values must increase");
        }
        if (!(c_values.back() / c_values.front() >= 99.999))
            throw DomainError("LimitRun: c values must span at least two decades");
        const double c0 = c_values.front();
        if (!(lambda < 2.0 * m * c0 * c0))
            throw GapError("LimitRun: lambda must lie in the gap for every c");
    }
};

/// |tau_D(gamma(c)) - tau_S(theta)| along the sweep.
inline ConvergenceTable tau_convergence(const LimitRun& run) {
    run.validate();
    const schrod::Params ps{run.alpha, run.m, 0};
    const double ts = schrod::tau(ps, run.lambda, run.theta);
    std::vector<double> metric;
    for (double c : run.c_values) {
        const dirac::Params pd{run.alpha, run.m, c, 0};
        const ExtParam g = gamma_schedule(run.theta, run.alpha, run.m, c);
        metric.push_back(std::abs(dirac::tau(pd, run.lambda, g) - ts));
    }
    return detail::make_table(run.c_values, metric);
}

enum class RankOneBlock { full, lower_right };

/// Entrywise convergence of the rank-one kernel
/// (lambda/c^2) Phi_D(r) Phi_D(rho)^H  ->  2m Phi_S(r) Phi_S(rho) (+) 0
/// on a fixed 10x10 sample of (r, rho); independent of theta.
inline ConvergenceTable rank_one_convergence(const LimitRun& run,
                                             RankOneBlock block = RankOneBlock::full) {
    run.validate();
    const schrod::Params ps{run.alpha, run.m, 0};
    const auto phis = schrod::decaying_solution(ps, run.lambda);
    const double kap = phis.decay_rate();
    std::array<double, 10> rs{};
    for (int q = 0; q < 10; ++q)
        rs[q] = (4.0 * std::pow(2.0, q / 9.0)) / kap; // z in [4, 8]

    std::vector<double> metric;
    for (double c : run.c_values) {
        const dirac::Params pd{run.alpha, run.m, c, 0};
        const auto phid = dirac::decaying_solution(pd, run.lambda);
        const double fac = run.lambda / (c * c);
        double worst = 0.0;
        for (double r : rs) {
            const auto pr = phid(r);
            const double sr = phis(r);
            for (double rho : rs) {
                const auto pq = phid(rho);
                const double sq = phis(rho);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        if (block == RankOneBlock::lower_right && (i != 1 || j != 1)) continue;
                        const cplx d = fac * pr[i] * std::conj(pq[j]);
                        const cplx target =
                            (i == 0 && j == 0) ? cplx(2.0 * run.m * sr * sq) : cplx(0.0);
                        worst = std::max(worst, std::abs(d - target));
                    }
            }
        }
        metric.push_back(worst);
    }
    return detail::make_table(run.c_values, metric);
}

namespace detail {

using Vec2 = std::vector<std::array<cplx, 2>>;

/// Separable-kernel discretization of a resolvent whose kernel is
/// factor [phi(max) (x) conj(f(min))] plus a rank-one tau part.  The
/// quadrature weights are split symmetrically, sqrt(w_i) K(r_i, r_j) sqrt(w_j),
/// which represents the integral operator on l^2 isometrically to L^2 and
/// keeps the matrix Hermitian for a real shift.
struct DiracDiscretization {
    Vec2 phi, f;
    std::vector<double> sw;
    double factor = 0.0;  // -lambda/c^2
    double tau_fac = 0.0; // tau * lambda/c^2

    DiracDiscretization(const dirac::Params& p, double lambda, const ExtParam& gamma,
                        const radial::RadialGrid& g) {
        const auto ph = dirac::decaying_solution(p, lambda);
        const auto fg = dirac::growing_solution(p, lambda);
        const int n = g.n();
        phi.resize(n);
        f.resize(n);
        sw.resize(n);
        for (int i = 0; i < n; ++i) {
            phi[i] = ph(g.r(i));
            f[i] = fg(g.r(i));
            sw[i] = std::sqrt(g.weights()[i]);
        }
        factor = -lambda / (p.c * p.c);
        tau_fac = dirac::tau(p, lambda, gamma) * lambda / (p.c * p.c);
    }

    // y_i = sum_j K(r_i, r_j) s_j.  The suffix sums are accumulated backward:
    // subtracting a prefix from the total cancels catastrophically against
    // the exponential growth of f.
    void kernel_sum(const Vec2& s, Vec2& y) const {
        const int n = static_cast<int>(phi.size());
        y.assign(n, {cplx(0), cplx(0)});
        std::vector<cplx> a(n), b(n), suf(n);
        for (int j = 0; j < n; ++j) {
            a[j] = std::conj(f[j][0]) * s[j][0] + std::conj(f[j][1]) * s[j][1];
            b[j] = std::conj(phi[j][0]) * s[j][0] + std::conj(phi[j][1]) * s[j][1];
        }
        suf[n - 1] = 0.0;
        for (int j = n - 2; j >= 0; --j) suf[j] = suf[j + 1] + b[j + 1];
        cplx tot_b = suf[0] + b[0];
        cplx pre_a = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int comp = 0; comp < 2; ++comp) {
                y[i][comp] = factor * (phi[i][comp] * (pre_a + 0.5 * a[i]) +
                                       f[i][comp] * (suf[i] + 0.5 * b[i])) +
                             tau_fac * phi[i][comp] * tot_b;
            }
            pre_a += a[i];
        }
    }

    void matvec(const Vec2& x, Vec2& y) const {
        Vec2 s(x.size());
        for (size_t j = 0; j < x.size(); ++j) s[j] = {sw[j] * x[j][0], sw[j] * x[j][1]};
        kernel_sum(s, y);
        for (size_t i = 0; i < y.size(); ++i) {
            y[i][0] *= sw[i];
            y[i][1] *= sw[i];
        }
    }
    void matvec_adj(const Vec2& x, Vec2& y) const { matvec(x, y); } // Hermitian
};

struct SchrodDiscretization {
    std::vector<double> phi, f, sw;
    double factor = 0.0;  // 2m
    double tau_fac = 0.0; // 2m tau

    SchrodDiscretization(const schrod::Params& p, double lambda, const ExtParam& theta,
                         const radial::RadialGrid& g) {
        const auto ph = schrod::decaying_solution(p, lambda);
        const auto fg = schrod::growing_solution(p, lambda);
        const int n = g.n();
        phi.resize(n);
        f.resize(n);
        sw.resize(n);
        for (int i = 0; i < n; ++i) {
            phi[i] = ph(g.r(i));
            f[i] = fg(g.r(i));
            sw[i] = std::sqrt(g.weights()[i]);
        }
        factor = 2.0 * p.m;
        tau_fac = 2.0 * p.m * schrod::tau(p, lambda, theta);
    }

    void kernel_sum(const std::vector<cplx>& s, std::vector<cplx>& y) const {
        const int n = static_cast<int>(phi.size());
        y.assign(n, cplx(0));
        std::vector<cplx> suf(n);
        suf[n - 1] = 0.0;
        for (int j = n - 2; j >= 0; --j) suf[j] = suf[j + 1] + phi[j + 1] * s[j + 1];
        cplx tot_b = suf[0] + phi[0] * s[0];
        cplx pre_a = 0.0;
        for (int i = 0; i < n; ++i) {
            const cplx a_i = f[i] * s[i];
            const cplx b_i = phi[i] * s[i];
            y[i] = factor * (phi[i] * (pre_a + 0.5 * a_i) + f[i] * (suf[i] + 0.5 * b_i)) +
                   tau_fac * phi[i] * tot_b;
            pre_a += a_i;
        }
    }

    void matvec(const std::vector<cplx>& x, std::vector<cplx>& y) const {
        std::vector<cplx> s(x.size());
        for (size_t j = 0; j < x.size(); ++j) s[j] = sw[j] * x[j];
        kernel_sum(s, y);
        for (size_t i = 0; i < y.size(); ++i) y[i] *= sw[i];
    }
    void matvec_adj(const std::vector<cplx>& x, std::vector<cplx>& y) const { matvec(x, y); }
};

inline double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}
inline double norm2(const Vec2& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z[0]) + std::norm(z[1]);
    return std::sqrt(s);
}

inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}
inline cplx dot(const Vec2& a, const Vec2& b) {
    cplx s = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i][0]) * b[i][0] + std::conj(a[i][1]) * b[i][1];
    return s;
}
template <class Vec>
void axpy(Vec& y, const cplx& a, const Vec& x) {
    for (size_t i = 0; i < y.size(); ++i) {
        if constexpr (std::is_same_v<Vec, Vec2>) {
            y[i][0] += a * x[i][0];
            y[i][1] += a * x[i][1];
        } else {
            y[i] += a * x[i];
        }
    }
}
template <class Vec>
void scale(Vec& y, double a) {
    for (auto& z : y) {
        if constexpr (std::is_same_v<Vec, Vec2>) {
            z[0] *= a;
            z[1] *= a;
        } else {
            z *= a;
        }
    }
}

/// Largest singular value of D by power (subspace) iteration on D*D with a
/// small deterministic block, 50 iterations or 1e-10 stagnation.
template <class Vec, class Apply, class ApplyH>
double power_sigma(int n, Apply&& apply, ApplyH&& applyh, int maxit = 50,
                   double stagnation = 1e-10) {
    constexpr int block = 3;
    std::vector<Vec> v(block, Vec(n)), dv(block, Vec(n));
    for (int b = 0; b < block; ++b)
        for (int i = 0; i < n; ++i) {
            const double re = std::sin(0.7 * i + 0.3 + 1.1 * b);
            const double im = std::cos(1.3 * i + 0.1 + 0.7 * b);
            if constexpr (std::is_same_v<Vec, Vec2>)
                v[b][i] = {cplx(re, im), cplx(im - 0.2 * b, -re)};
            else
                v[b][i] = cplx(re, im);
        }
    auto orthonormalize = [&](std::vector<Vec>& vs) {
        for (int b = 0; b < block; ++b) {
            for (int q = 0; q < b; ++q) {
                const cplx pr = dot(vs[q], vs[b]);
                axpy(vs[b], -pr, vs[q]);
            }
            const double nb = norm2(vs[b]);
            if (nb > 0.0) scale(vs[b], 1.0 / nb);
        }
    };
    orthonormalize(v);
    double sigma = 0.0;
    for (int it = 0; it < maxit; ++it) {
        double best = 0.0;
        for (int b = 0; b < block; ++b) {
            apply(v[b], dv[b]);
            best = std::max(best, norm2(dv[b]));
        }
        for (int b = 0; b < block; ++b) applyh(dv[b], v[b]);
        orthonormalize(v);
        if (it > 0 && std::abs(best - sigma) <= stagnation * std::max(best, 1e-300)) {
            sigma = best;
            break;
        }
        sigma = best;
    }
    return sigma;
}

} // namespace detail

/// Quadrature grid suited to the discretized-resolvent metric at shift lambda.
inline radial::GridPtr default_norm_grid(double m, double lambda, int panels_per_decade = 24,
                                         int points_per_panel = 8) {
    const double kap = std::sqrt(2.0 * m * lambda);
    return radial::RadialGrid::gauss_panels(1e-6, 60.0 / (0.9 * kap), panels_per_decade,
                                            points_per_panel);
}

/// Collects the gap eigenvalues along the schedule and rejects shifts that
/// collide with any of them (tolerance 1e-6 absolute).
inline std::vector<double> sweep_gap_eigenvalues(const LimitRun& run) {
    std::vector<double> eigs;
    for (double c : run.c_values) {
        const dirac::Params pd{run.alpha, run.m, c, 0};
        const ExtParam g = gamma_schedule(run.theta, run.alpha, run.m, c);
        if (auto e = dirac::gap_eigenvalue(pd, g)) eigs.push_back(*e);
    }
    return eigs;
}

/// Shift selection: pick lambda in (0, 2 m c0^2) at least margin * 2 m c0^2
/// away from every gap eigenvalue detected along the sweep.
inline double choose_lambda(const ExtParam& theta, double alpha, double m,
                            const std::vector<double>& c_values, double margin = 0.1) {
    LimitRun probe{theta, alpha, m, 1e-6, c_values, nullptr};
    probe.validate();
    const auto eigs = sweep_gap_eigenvalues(probe);
    const double gap0 = 2.0 * m * c_values.front() * c_values.front();
    double best = -1.0, best_lambda = 0.0;
    for (int q = 1; q <= 49; ++q) {
        const double cand = gap0 * q / 50.0 * 0.98;
        double dist = std::min(cand, gap0 - cand);
        for (double e : eigs) dist = std::min(dist, std::abs(cand - e));
        if (dist > best) {
            best = dist;
            best_lambda = cand;
        }
    }
    if (best < margin * gap0)
        throw EigenvalueCollision("choose_lambda: no shift clears the eigenvalue margin");
    return best_lambda;
}

/// Largest-singular-value table of the discretized resolvent difference
/// (gamma(c) family at shift lambda) minus (theta family (+) 0).
inline ConvergenceTable resolvent_norm_convergence(const LimitRun& run,
                                                   bool upper_left_only = false) {
    run.validate();
    if (!run.grid) throw GridError("resolvent_norm_convergence: run.grid is required");
    for (double c : run.c_values) {
        const dirac::Params pd{run.alpha, run.m, c, 0};
        const ExtParam g = gamma_schedule(run.theta, run.alpha, run.m, c);
        if (auto e = dirac::gap_eigenvalue(pd, g)) {
            if (std::abs(run.lambda - *e) < 1e-6)
                throw EigenvalueCollision(
                    "resolvent_norm_convergence: lambda collides with a gap eigenvalue");
        }
    }
    const schrod::Params ps{run.alpha, run.m, 0};
    const detail::SchrodDiscretization ms(ps, run.lambda, run.theta, *run.grid);
    const int n = run.grid->n();

    std::vector<double> metric;
    for (double c : run.c_values) {
        const dirac::Params pd{run.alpha, run.m, c, 0};
        const ExtParam g = gamma_schedule(run.theta, run.alpha, run.m, c);
        const detail::DiracDiscretization md(pd, run.lambda, g, *run.grid);

        if (upper_left_only) {
            auto apply = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
                detail::Vec2 x2(n), y2(n);
                for (int i = 0; i < n; ++i) x2[i] = {x[i], cplx(0)};
                md.matvec(x2, y2);
                std::vector<cplx> ys(n);
                ms.matvec(x, ys);
                y.resize(n);
                for (int i = 0; i < n; ++i) y[i] = y2[i][0] - ys[i];
            };
            auto applyh = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
                detail::Vec2 x2(n), y2(n);
                for (int i = 0; i < n; ++i) x2[i] = {x[i], cplx(0)};
                md.matvec_adj(x2, y2);
                std::vector<cplx> ys(n);
                ms.matvec_adj(x, ys);
                y.resize(n);
                for (int i = 0; i < n; ++i) y[i] = y2[i][0] - ys[i];
            };
            metric.push_back(
                detail::power_sigma<std::vector<cplx>>(n, apply, applyh));
        } else {
            auto apply = [&](const detail::Vec2& x, detail::Vec2& y) {
                md.matvec(x, y);
                std::vector<cplx> xu(n), ys(n);
                for (int i = 0; i < n; ++i) xu[i] = x[i][0];
                ms.matvec(xu, ys);
                for (int i = 0; i < n; ++i) y[i][0] -= ys[i];
            };
            auto applyh = [&](const detail::Vec2& x, detail::Vec2& y) {
                md.matvec_adj(x, y);
                std::vector<cplx> xu(n), ys(n);
                for (int i = 0; i < n; ++i) xu[i] = x[i][0];
                ms.matvec_adj(xu, ys);
                for (int i = 0; i < n; ++i) y[i][0] -= ys[i];
            };
            metric.push_back(detail::power_sigma<detail::Vec2>(n, apply, applyh));
        }
    }
    return detail::make_table(run.c_values, metric);
}

/// Gap-eigenvalue convergence to the bound state of the theta extension.
inline ConvergenceTable eigenvalue_convergence(double theta, double alpha, double m,
                                               const std::vector<double>& c_values) {
    if (!(theta < 0.0))
        throw DomainError("eigenvalue_convergence: theta must be negative");
    const schrod::Params ps{alpha, m, 0};
    const auto es = schrod::bound_state(ps, ExtParam::finite(theta));
    if (!es) throw MissingEigenvalue("eigenvalue_convergence: no bound state");
    std::vector<double> metric;
    for (double c : c_values) {
        const dirac::Params pd{alpha, m, c, 0};
        const ExtParam g = gamma_schedule(ExtParam::finite(theta), alpha, m, c);
        const auto ld = dirac::gap_eigenvalue(pd, g);
        if (!ld)
            throw MissingEigenvalue("eigenvalue_convergence: gap eigenvalue scan failed");
        metric.push_back(std::abs(-*ld - *es));
    }
    return detail::make_table(c_values, metric);
}

/// Positron-side prefactor convergence through the (-alpha, 1/gamma)
/// equivalence: |tau_D(-alpha, 1/gamma(c)) - tau_S(-alpha, theta)|.
inline ConvergenceTable positron_tau_convergence(const ExtParam& theta, double alpha,
                                                 double m, double lambda,
                                                 const std::vector<double>& c_values) {
    check_alpha(alpha);
    if (!theta.is_inf() && theta.value() == 0.0)
        throw DomainError("positron_tau_convergence: theta must be nonzero");
    const schrod::Params ps{-alpha, m, 0};
    const double ts = schrod::tau(ps, lambda, theta);
    std::vector<double> metric;
    for (double c : c_values) {
        const dirac::Params pd{-alpha, m, c, 0};
        const ExtParam ginv = positron_inverse_schedule(theta, alpha, m, c);
        metric.push_back(std::abs(dirac::tau(pd, lambda, ginv) - ts));
    }
    return detail::make_table(c_values, metric);
}

} // namespace abspec::nonrel

#endif
