/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_RADIAL_HPP
#define ABSPEC_RADIAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"

// Grids, quadrature and numerical differentiation on the half-line, tuned to
// integrands with r^{+-alpha} edge behaviour and exponential tails.  All
// quadrature is carried out in the log variable x = log r, where power-law
// edges become exponentials.
//
// Two grid kinds:
//  * log_uniform   - equispaced in log r; supports diff() and cumulative
//                    integrals (6-point local polynomial rule, O(h^6));
//  * gauss_panels  - Gauss-Legendre nodes inside log-spaced panels; the
//                    preferred quadrature grid for plain integrals.

namespace abspec::radial {

enum class GridKind { log_uniform, gauss_panels };

namespace detail {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

/// Integrals of the degree-5 Lagrange basis on nodes {0..5} over [t, t+1].
inline const std::array<std::array<double, 6>, 5>& lagrange6_interval_weights() {
    static const auto table = [] {
        std::array<std::array<double, 6>, 5> tw{};
        std::vector<double> gx, gw;
        gauss_legendre(6, gx, gw);
        for (int t = 0; t < 5; ++t) {
            for (int m = 0; m < 6; ++m) {
                double acc = 0.0;
                for (int q = 0; q < 6; ++q) {
                    const double u = t + 0.5 * (gx[q] + 1.0);
                    double L = 1.0;
                    for (int l = 0; l < 6; ++l)
                        if (l != m) L *= (u - l) / (m - l);
                    acc += 0.5 * gw[q] * L;
                }
                tw[t][m] = acc;
            }
        }
        return tw;
    }();
    return table;
}

/// Fornberg finite-difference weights for derivative order m at point z.
inline std::vector<double> fd_weights(double z, const std::vector<double>& xs, int m) {
    const int n = static_cast<int>(xs.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = c[i][m];
    return out;
}

} // namespace detail

class RadialGrid {
public:
    static std::shared_ptr<const RadialGrid> log_uniform(double rmin, double rmax, int n) {
        if (!(rmin > 0.0) || !(rmax > rmin)) throw GridError("grid: need 0 < rmin < rmax");
        if (n < 8) throw GridError("grid: need at least 8 nodes");
        const double decades = std::log10(rmax / rmin);
        if ((n - 1) / decades < 8.0) throw GridError("grid: need at least 8 nodes per decade");
        auto g = std::make_shared<RadialGrid>();
        g->kind_ = GridKind::log_uniform;
        g->rmin_ = rmin;
        g->rmax_ = rmax;
        const double xa = std::log(rmin), xb = std::log(rmax);
        g->dx_ = (xb - xa) / (n - 1);
        g->r_.resize(n);
        for (int i = 0; i < n; ++i) g->r_[i] = std::exp(xa + i * g->dx_);
        g->r_.front() = rmin;
        g->r_.back() = rmax;
        g->build_uniform_weights();
        return g;
    }

    static std::shared_ptr<const RadialGrid> gauss_panels(double rmin, double rmax,
                                                          int panels_per_decade,
                                                          int points_per_panel) {
        if (!(rmin > 0.0) || !(rmax > rmin)) throw GridError("grid: need 0 < rmin < rmax");
        if (panels_per_decade < 1 || points_per_panel < 1)
            throw GridError("grid: invalid panel counts");
        auto g = std::make_shared<RadialGrid>();
        g->kind_ = GridKind::gauss_panels;
        g->rmin_ = rmin;
        g->rmax_ = rmax;
        g->pts_per_panel_ = points_per_panel;
        const double xa = std::log(rmin), xb = std::log(rmax);
        const int npanel = std::max(1, static_cast<int>(std::ceil(
                                           std::log10(rmax / rmin) * panels_per_decade)));
        if (npanel * points_per_panel / std::log10(rmax / rmin) < 8.0)
            throw GridError("grid: need at least 8 nodes per decade");
        std::vector<double> gx, gw;
        detail::gauss_legendre(points_per_panel, gx, gw);
        g->r_.reserve(npanel * points_per_panel);
        g->w_.reserve(npanel * points_per_panel);
        for (int p = 0; p < npanel; ++p) {
            const double a = xa + (xb - xa) * p / npanel;
            const double b = xa + (xb - xa) * (p + 1) / npanel;
            for (int q = 0; q < points_per_panel; ++q) {
                const double x = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
                const double r = std::exp(x);
                g->r_.push_back(r);
                g->w_.push_back(0.5 * (b - a) * gw[q] * r);
            }
        }
        return g;
    }

    GridKind kind() const { return kind_; }
    int n() const { return static_cast<int>(r_.size()); }
    double r(int i) const { return r_[i]; }
    const std::vector<double>& nodes() const { return r_; }
    const std::vector<double>& weights() const { return w_; }
    double rmin() const { return rmin_; }
    double rmax() const { return rmax_; }
    double log_step() const {
        if (kind_ != GridKind::log_uniform) throw GridError("grid: not log-uniform");
        return dx_;
    }

    /// Index range [lo, hi) away from both ends of the log range.
    std::pair<int, int> interior_span(double frac_lo = 0.2, double frac_hi = 0.1) const {
        const double xa = std::log(rmin_), xb = std::log(rmax_);
        const double lo = xa + frac_lo * (xb - xa), hi = xb - frac_hi * (xb - xa);
        int i0 = 0, i1 = n();
        while (i0 < n() && std::log(r_[i0]) < lo) ++i0;
        while (i1 > 0 && std::log(r_[i1 - 1]) > hi) --i1;
        if (i0 >= i1) throw GridError("grid: empty interior span");
        return {i0, i1};
    }

    friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
        return a.kind_ == b.kind_ && a.r_.size() == b.r_.size() && a.rmin_ == b.rmin_ &&
               a.rmax_ == b.rmax_;
    }

    RadialGrid() = default;

private:
    void build_uniform_weights() {
        const int n = static_cast<int>(r_.size());
        w_.assign(n, 0.0);
        const auto& tw = detail::lagrange6_interval_weights();
        for (int j = 0; j + 1 < n; ++j) {
            const int s = std::clamp(j - 2, 0, n - 6);
            const int t = j - s;
            for (int m = 0; m < 6; ++m) w_[s + m] += dx_ * tw[t][m] * r_[s + m];
        }
    }

    GridKind kind_ = GridKind::log_uniform;
    double rmin_ = 0.0, rmax_ = 0.0, dx_ = 0.0;
    int pts_per_panel_ = 0;
    std::vector<double> r_;
    std::vector<double> w_;

public:
    /// Per-interval contribution of samples f to int_{r_j}^{r_{j+1}} f dr.
    template <class T>
    T interval_integral(int j, const std::vector<T>& f) const {
        if (kind_ != GridKind::log_uniform) throw GridError("grid: cumulative rule needs log-uniform grid");
        const int n = static_cast<int>(r_.size());
        const int s = std::clamp(j - 2, 0, n - 6);
        const int t = j - s;
        const auto& tw = detail::lagrange6_interval_weights();
        T acc{};
        for (int m = 0; m < 6; ++m) acc += dx_ * tw[t][m] * r_[s + m] * f[s + m];
        return acc;
    }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// One-component complex samples on a grid.
struct RadialFn {
    GridPtr grid;
    std::vector<cplx> v;

    RadialFn() = default;
    RadialFn(GridPtr g, std::vector<cplx> vals) : grid(std::move(g)), v(std::move(vals)) {
        check();
    }
    void check() const {
        if (!grid || static_cast<int>(v.size()) != grid->n())
            throw ShapeError("RadialFn: value array does not match grid");
    }
};

/// Two-component complex samples on a grid.
struct RadialSpinor {
    GridPtr grid;
    std::vector<cplx> up, dn;

    RadialSpinor() = default;
    RadialSpinor(GridPtr g, std::vector<cplx> u, std::vector<cplx> d)
        : grid(std::move(g)), up(std::move(u)), dn(std::move(d)) {
        check();
    }
    void check() const {
        if (!grid || static_cast<int>(up.size()) != grid->n() ||
            static_cast<int>(dn.size()) != grid->n())
            throw ShapeError("RadialSpinor: value arrays do not match grid");
    }
};

template <class F>
RadialFn sample(const GridPtr& g, F&& f) {
    std::vector<cplx> v(g->n());
    for (int i = 0; i < g->n(); ++i) v[i] = cplx(f(g->r(i)));
    return RadialFn(g, std::move(v));
}

template <class F>
RadialSpinor sample_spinor(const GridPtr& g, F&& f) {
    std::vector<cplx> u(g->n()), d(g->n());
    for (int i = 0; i < g->n(); ++i) {
        const auto val = f(g->r(i));
        u[i] = val[0];
        d[i] = val[1];
    }
    return RadialSpinor(g, std::move(u), std::move(d));
}

/// Integral of f over its grid range.
inline cplx quad(const RadialFn& f) {
    f.check();
    const auto& w = f.grid->weights();
    cplx acc = 0.0;
    for (int i = 0; i < f.grid->n(); ++i) acc += w[i] * f.v[i];
    return acc;
}

template <class F>
cplx quad(const GridPtr& g, F&& f) {
    cplx acc = 0.0;
    const auto& w = g->weights();
    for (int i = 0; i < g->n(); ++i) acc += w[i] * cplx(f(g->r(i)));
    return acc;
}

/// Prefix integrals P_i = int_{rmin}^{r_i} f dr (log-uniform grids only).
inline std::vector<cplx> cum_prefix(const RadialGrid& g, const std::vector<cplx>& f) {
    const int n = g.n();
    std::vector<cplx> p(n);
    p[0] = 0.0;
    for (int j = 0; j + 1 < n; ++j) p[j + 1] = p[j] + g.interval_integral(j, f);
    return p;
}

/// Suffix integrals S_i = int_{r_i}^{rmax} f dr, accumulated backward.
inline std::vector<cplx> cum_suffix(const RadialGrid& g, const std::vector<cplx>& f) {
    const int n = g.n();
    std::vector<cplx> s(n);
    s[n - 1] = 0.0;
    for (int j = n - 2; j >= 0; --j) s[j] = s[j + 1] + g.interval_integral(j, f);
    return s;
}

/// Derivative of order 1 or 2 by 4th-order stencils in log r.
inline RadialFn diff(const RadialFn& f, int order) {
    f.check();
    if (order != 1 && order != 2) throw DomainError("diff: order must be 1 or 2");
    const auto& g = *f.grid;
    if (g.kind() != GridKind::log_uniform) throw GridError("diff: grid must be log-uniform");
    const int n = g.n();
    if (n < 6) throw GridError("diff: need at least 6 nodes");
    const double h = g.log_step();

    static thread_local std::vector<double> c1_central, c2_central;
    if (c1_central.empty()) {
        const std::vector<double> offs = {-2, -1, 0, 1, 2};
        c1_central = detail::fd_weights(0.0, offs, 1);
        c2_central = detail::fd_weights(0.0, offs, 2);
    }

    auto edge_weights = [&](int i, int m) {
        // one-sided 6-node stencil anchored at the boundary
        std::vector<double> offs(6);
        const int s = (i < 3) ? 0 : n - 6;
        for (int q = 0; q < 6; ++q) offs[q] = s + q - i;
        return detail::fd_weights(0.0, offs, m);
    };

    auto dlog = [&](int i, int m) {
        cplx acc = 0.0;
        if (i >= 2 && i <= n - 3) {
            const auto& c = m == 1 ? c1_central : c2_central;
            for (int q = 0; q < 5; ++q) acc += c[q] * f.v[i - 2 + q];
        } else {
            const auto c = edge_weights(i, m);
            const int s = (i < 3) ? 0 : n - 6;
            for (int q = 0; q < 6; ++q) acc += c[q] * f.v[s + q];
        }
        return acc / std::pow(h, m);
    };

    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        const double r = g.r(i);
        if (order == 1) {
            out[i] = dlog(i, 1) / r;
        } else {
            out[i] = (dlog(i, 2) - dlog(i, 1)) / (r * r);
        }
    }
    return RadialFn(f.grid, std::move(out));
}

/// Smooth bump supported on [a, b], equal to 1 at the midpoint.
inline double bump(double r, double a, double b) {
    const double t = (2.0 * r - a - b) / (b - a);
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// ---------------------------------------------------------------------------
// CSV fixtures

namespace detail {
inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
} // namespace detail

inline void write_csv(std::ostream& os, const RadialFn& f) {
    f.check();
    os << "r,re,im\n";
    for (int i = 0; i < f.grid->n(); ++i)
        os << detail::fmt(f.grid->r(i)) << ',' << detail::fmt(f.v[i].real()) << ','
           << detail::fmt(f.v[i].imag()) << '\n';
}

inline void write_csv(std::ostream& os, const RadialSpinor& f) {
    f.check();
    os << "r,re0,im0,re1,im1\n";
    for (int i = 0; i < f.grid->n(); ++i)
        os << detail::fmt(f.grid->r(i)) << ',' << detail::fmt(f.up[i].real()) << ','
           << detail::fmt(f.up[i].imag()) << ',' << detail::fmt(f.dn[i].real()) << ','
           << detail::fmt(f.dn[i].imag()) << '\n';
}

/// Reads back the sample columns written by write_csv (grid supplied by caller).
inline RadialFn read_csv_fn(std::istream& is, const GridPtr& g) {
    std::string line;
    std::getline(is, line); // header
    std::vector<cplx> v;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double r, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &re, &im) != 3)
            throw ShapeError("csv: malformed row");
        v.emplace_back(re, im);
    }
    return RadialFn(g, std::move(v));
}

inline RadialSpinor read_csv_spinor(std::istream& is, const GridPtr& g) {
    std::string line;
    std::getline(is, line);
    std::vector<cplx> u, d;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double r, a, b, c, e;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &r, &a, &b, &c, &e) != 5)
            throw ShapeError("csv: malformed row");
        u.emplace_back(a, b);
        d.emplace_back(c, e);
    }
    return RadialSpinor(g, std::move(u), std::move(d));
}

} // namespace abspec::radial

#endif
