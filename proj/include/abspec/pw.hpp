/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef ABSPEC_PW_HPP
#define ABSPEC_PW_HPP

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "core.hpp"
#include "dirac.hpp"
#include "radial.hpp"
#include "schrod.hpp"

// Partial-wave machinery on polar grids: unitary decomposition of 2D scalar
// and spinor fields into angular blocks, reconstruction, and block-wise
// application of the half-line operators.
//
// Conventions (unitary 1/sqrt(2 pi) normalization throughout):
//   scalar:  block_k(r) = (1/sqrt(2 pi)) int e^{i k t} sqrt(r) f(r, t) dt,
//            so a field g(r) e^{-i k0 t} lands in the single block k0.
//   spinor:  the components carry the half-integer twist e^{+-i t/2} before a
//            transform with exponent k - 1/2; combined, the upper component of
//            block k is the integer mode e^{-i k t} and the lower component is
//            e^{-i (k-1) t}.  This is the labelling under which the block
//            operators act diagonally with index k.

namespace abspec::pw {

using radial::GridPtr;
using radial::RadialFn;
using radial::RadialSpinor;

namespace detail {
inline bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace detail

/// Complex samples on the product of a radial grid and an equispaced angle grid.
struct PolarField {
    GridPtr grid;
    int n_theta = 0;
    int ncomp = 1;
    std::vector<cplx> data; // layout: ((comp * nr) + ir) * n_theta + jt

    static PolarField zeros(GridPtr g, int n_theta, int ncomp) {
        PolarField f;
        f.grid = std::move(g);
        f.n_theta = n_theta;
        f.ncomp = ncomp;
        f.data.assign(static_cast<size_t>(f.grid->n()) * n_theta * ncomp, cplx(0));
        f.check();
        return f;
    }

    void check() const {
        if (!grid) throw ShapeError("PolarField: missing grid");
        if (n_theta < 16 || !detail::power_of_two(n_theta))
            throw ShapeError("PolarField: n_theta must be a power of two, at least 16");
        if (ncomp != 1 && ncomp != 2) throw ShapeError("PolarField: 1 or 2 components");
        if (data.size() != static_cast<size_t>(grid->n()) * n_theta * ncomp)
            throw ShapeError("PolarField: value array does not match grid");
    }

    double theta(int j) const { return 2.0 * pi * j / n_theta; }

    cplx& at(int comp, int ir, int jt) {
        return data[(static_cast<size_t>(comp) * grid->n() + ir) * n_theta + jt];
    }
    const cplx& at(int comp, int ir, int jt) const {
        return data[(static_cast<size_t>(comp) * grid->n() + ir) * n_theta + jt];
    }
};

/// Radial blocks indexed by a contiguous k range.
struct BlockStack {
    GridPtr grid;
    int kmin = 0;
    int nblocks = 0;
    int ncomp = 1;
    std::vector<cplx> data; // layout: ((b * nr) + ir) * ncomp + comp

    int k_of(int b) const { return kmin + b; }
    int block_of(int k) const { return k - kmin; }

    cplx& at(int b, int ir, int comp) {
        return data[(static_cast<size_t>(b) * grid->n() + ir) * ncomp + comp];
    }
    const cplx& at(int b, int ir, int comp) const {
        return data[(static_cast<size_t>(b) * grid->n() + ir) * ncomp + comp];
    }

    /// L^2 weight of one block (quadrature in r of the squared modulus).
    double block_norm_sq(int b) const {
        double acc = 0.0;
        const auto& w = grid->weights();
        for (int i = 0; i < grid->n(); ++i)
            for (int c = 0; c < ncomp; ++c) acc += w[i] * std::norm(at(b, i, c));
        return acc;
    }
};

namespace detail {
/// Twiddle table e^{2 pi i m / n} for m = 0..n-1.
inline std::vector<cplx> twiddles(int n) {
    std::vector<cplx> tw(n);
    for (int m = 0; m < n; ++m)
        tw[m] = std::exp(iu * (2.0 * pi * m / n));
    return tw;
}
inline int mod_index(long long kj, int n) {
    const long long m = kj % n;
    return static_cast<int>(m < 0 ? m + n : m);
}
} // namespace detail

inline BlockStack decompose_scalar(const PolarField& f) {
    f.check();
    if (f.ncomp != 1) throw ShapeError("decompose_scalar: field must have one component");
    const int n = f.n_theta, nr = f.grid->n();
    BlockStack b;
    b.grid = f.grid;
    b.kmin = -n / 2;
    b.nblocks = n;
    b.ncomp = 1;
    b.data.assign(static_cast<size_t>(n) * nr, cplx(0));
    const auto tw = detail::twiddles(n);
    const double norm = std::sqrt(2.0 * pi) / n;
    for (int ir = 0; ir < nr; ++ir) {
        const double sq = std::sqrt(f.grid->r(ir));
        for (int bb = 0; bb < n; ++bb) {
            const int k = b.kmin + bb;
            cplx acc = 0.0;
            for (int j = 0; j < n; ++j)
                acc += tw[detail::mod_index(static_cast<long long>(k) * j, n)] * f.at(0, ir, j);
            b.at(bb, ir, 0) = norm * sq * acc;
        }
    }
    return b;
}

inline PolarField reconstruct_scalar(const BlockStack& b) {
    if (b.ncomp != 1) throw ShapeError("reconstruct_scalar: stack must have one component");
    const int n = b.nblocks, nr = b.grid->n();
    PolarField f = PolarField::zeros(b.grid, n, 1);
    const auto tw = detail::twiddles(n);
    const double norm = 1.0 / std::sqrt(2.0 * pi);
    for (int ir = 0; ir < nr; ++ir) {
        const double sq = std::sqrt(f.grid->r(ir));
        for (int j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (int bb = 0; bb < n; ++bb) {
                const int k = b.kmin + bb;
                acc += tw[detail::mod_index(-static_cast<long long>(k) * j, n)] * b.at(bb, ir, 0);
            }
            f.at(0, ir, j) = norm * acc / sq;
        }
    }
    return f;
}

inline BlockStack decompose_spinor(const PolarField& f) {
    f.check();
    if (f.ncomp != 2) throw ShapeError("decompose_spinor: field must have two components");
    const int n = f.n_theta, nr = f.grid->n();
    BlockStack b;
    b.grid = f.grid;
    b.kmin = -n / 2 + 1;
    b.nblocks = n;
    b.ncomp = 2;
    b.data.assign(static_cast<size_t>(n) * nr * 2, cplx(0));
    const auto tw = detail::twiddles(n);
    const double norm = std::sqrt(2.0 * pi) / n;
    for (int ir = 0; ir < nr; ++ir) {
        const double sq = std::sqrt(f.grid->r(ir));
        for (int bb = 0; bb < n; ++bb) {
            const int k = b.kmin + bb;
            cplx up = 0.0, dn = 0.0;
            for (int j = 0; j < n; ++j) {
                up += tw[detail::mod_index(static_cast<long long>(k) * j, n)] * f.at(0, ir, j);
                dn += tw[detail::mod_index(static_cast<long long>(k - 1) * j, n)] * f.at(1, ir, j);
            }
            b.at(bb, ir, 0) = norm * sq * up;
            b.at(bb, ir, 1) = norm * sq * dn;
        }
    }
    return b;
}

inline PolarField reconstruct_spinor(const BlockStack& b) {
    if (b.ncomp != 2) throw ShapeError("reconstruct_spinor: stack must have two components");
    const int n = b.nblocks, nr = b.grid->n();
    PolarField f = PolarField::zeros(b.grid, n, 2);
    const auto tw = detail::twiddles(n);
    const double norm = 1.0 / std::sqrt(2.0 * pi);
    for (int ir = 0; ir < nr; ++ir) {
        const double sq = std::sqrt(f.grid->r(ir));
        for (int j = 0; j < n; ++j) {
            cplx up = 0.0, dn = 0.0;
            for (int bb = 0; bb < n; ++bb) {
                const int k = b.kmin + bb;
                up += tw[detail::mod_index(-static_cast<long long>(k) * j, n)] * b.at(bb, ir, 0);
                dn += tw[detail::mod_index(-static_cast<long long>(k - 1) * j, n)] * b.at(bb, ir, 1);
            }
            f.at(0, ir, j) = norm * up / sq;
            f.at(1, ir, j) = norm * dn / sq;
        }
    }
    return f;
}

/// Decompose, apply the Schroedinger block operator per block, reconstruct.
inline PolarField apply_via_blocks(const PolarField& f, const schrod::Params& base) {
    BlockStack b = decompose_scalar(f);
    const int nr = b.grid->n();
    for (int bb = 0; bb < b.nblocks; ++bb) {
        schrod::Params pk = base;
        pk.k = b.k_of(bb);
        std::vector<cplx> col(nr);
        for (int i = 0; i < nr; ++i) col[i] = b.at(bb, i, 0);
        const RadialFn out = schrod::apply(pk, RadialFn(b.grid, std::move(col)));
        for (int i = 0; i < nr; ++i) b.at(bb, i, 0) = out.v[i];
    }
    return reconstruct_scalar(b);
}

/// Decompose, apply the Dirac block operator per block, reconstruct.
inline PolarField apply_via_blocks(const PolarField& f, const dirac::Params& base) {
    BlockStack b = decompose_spinor(f);
    const int nr = b.grid->n();
    for (int bb = 0; bb < b.nblocks; ++bb) {
        dirac::Params pk = base;
        pk.k = b.k_of(bb);
        std::vector<cplx> up(nr), dn(nr);
        for (int i = 0; i < nr; ++i) {
            up[i] = b.at(bb, i, 0);
            dn[i] = b.at(bb, i, 1);
        }
        const RadialSpinor out = dirac::apply(pk, RadialSpinor(b.grid, std::move(up), std::move(dn)));
        for (int i = 0; i < nr; ++i) {
            b.at(bb, i, 0) = out.up[i];
            b.at(bb, i, 1) = out.dn[i];
        }
    }
    return reconstruct_spinor(b);
}

/// Evaluate a reconstructed field at arbitrary (r, theta): exact exponential
/// sum in the angle, 6-point polynomial interpolation in log r.
inline cplx eval_block_sum(const BlockStack& b, int comp, double r, double theta) {
    const auto& g = *b.grid;
    if (g.kind() != radial::GridKind::log_uniform)
        throw GridError("eval_block_sum: log-uniform grid required");
    const int n = g.n();
    const double x = std::log(r);
    const double x0 = std::log(g.rmin());
    const double h = g.log_step();
    int s = static_cast<int>(std::floor((x - x0) / h)) - 2;
    s = std::clamp(s, 0, n - 6);
    // Lagrange weights on the 6 surrounding nodes
    double lw[6];
    for (int m = 0; m < 6; ++m) {
        double L = 1.0;
        const double um = x0 + (s + m) * h;
        for (int l = 0; l < 6; ++l) {
            if (l == m) continue;
            const double ul = x0 + (s + l) * h;
            L *= (x - ul) / (um - ul);
        }
        lw[m] = L;
    }
    cplx acc = 0.0;
    for (int bb = 0; bb < b.nblocks; ++bb) {
        const int k = b.k_of(bb);
        cplx rad = 0.0;
        for (int m = 0; m < 6; ++m) rad += lw[m] * b.at(bb, s + m, comp);
        const double mode = (b.ncomp == 2 && comp == 1) ? -(k - 1.0) : -static_cast<double>(k);
        acc += rad * std::exp(iu * (mode * theta));
    }
    return acc / std::sqrt(2.0 * pi) / std::sqrt(r);
}

// ---------------------------------------------------------------------------
// CSV import/export

inline void write_csv(std::ostream& os, const PolarField& f) {
    f.check();
    os << (f.ncomp == 1 ? "r,theta,re0,im0\n" : "r,theta,re0,im0,re1,im1\n");
    char buf[64];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
        os << buf;
    };
    for (int i = 0; i < f.grid->n(); ++i)
        for (int j = 0; j < f.n_theta; ++j) {
            put(f.grid->r(i), ',');
            put(f.theta(j), ',');
            for (int c = 0; c < f.ncomp; ++c) {
                put(f.at(c, i, j).real(), ',');
                put(f.at(c, i, j).imag(), (c + 1 == f.ncomp) ? '\n' : ',');
            }
        }
}

inline PolarField read_csv_polar(std::istream& is, const GridPtr& g, int n_theta, int ncomp) {
    PolarField f = PolarField::zeros(g, n_theta, ncomp);
    std::string line;
    std::getline(is, line); // header
    int row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const int i = row / n_theta, j = row % n_theta;
        double r, t, a, b, c = 0, d = 0;
        const int want = ncomp == 1 ? 4 : 6;
        const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &r, &t, &a, &b, &c, &d);
        if (got != want) throw ShapeError("csv: malformed polar row");
        f.at(0, i, j) = cplx(a, b);
        if (ncomp == 2) f.at(1, i, j) = cplx(c, d);
        ++row;
    }
    if (row != g->n() * n_theta) throw ShapeError("csv: row count does not match grid");
    return f;
}

} // namespace abspec::pw

#endif
