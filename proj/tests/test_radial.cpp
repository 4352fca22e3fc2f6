/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "support.hpp"

using namespace abspec;
using radial::RadialGrid;

TEST_CASE("grid: construction and validation") {
    CHECK_THROWS_AS(RadialGrid::log_uniform(-1.0, 10.0, 100), GridError);
    CHECK_THROWS_AS(RadialGrid::log_uniform(1.0, 0.5, 100), GridError);
    CHECK_THROWS_AS(RadialGrid::log_uniform(1e-6, 60.0, 32), GridError); // < 8 per decade
    auto g = RadialGrid::log_uniform(1e-6, 60.0, 2048);
    CHECK(g->n() == 2048);
    CHECK(g->r(0) == 1e-6);
    CHECK(g->r(2047) == 60.0);
    for (int i = 1; i < g->n(); ++i) CHECK(g->r(i) > g->r(i - 1));
    auto [i0, i1] = g->interior_span();
    CHECK(i0 > 0);
    CHECK(i1 < g->n());
}

TEST_CASE("quad: exponential integral") {
    // integral over the truncated range, to quadrature accuracy
    auto g = RadialGrid::log_uniform(1e-4, 60.0, 2048);
    const double exact = std::exp(-1e-4) - std::exp(-60.0);
    CHECK(std::abs(radial::quad(radial::sample(g, [](double r) { return std::exp(-r); })).real() -
                   exact) < 1e-11);
    // with the lower edge pushed down, the half-line value 1 to 1e-9
    auto g2 = RadialGrid::log_uniform(1e-10, 60.0, 2048);
    CHECK(std::abs(radial::quad(radial::sample(g2, [](double r) { return std::exp(-r); })).real() -
                   1.0) < 1e-9);
    auto gp = RadialGrid::gauss_panels(1e-10, 60.0, 8, 6);
    CHECK(std::abs(radial::quad(gp, [](double r) { return std::exp(-r); }).real() - 1.0) < 1e-9);
}

TEST_CASE("quad: power-law edge") {
    const double exact = 2.5 * (1.0 - std::pow(10.0, -2.4));
    auto gp = RadialGrid::gauss_panels(1e-6, 1.0, 8, 6);
    CHECK(std::abs(radial::quad(gp, [](double r) { return std::pow(r, -0.6); }).real() - exact) <
          1e-10 * exact);
    auto gu = RadialGrid::log_uniform(1e-6, 1.0, 512);
    CHECK(std::abs(radial::quad(radial::sample(gu, [](double r) { return std::pow(r, -0.6); }))
                       .real() -
                   exact) < 1e-9 * exact);
}

TEST_CASE("quad: decaying-solution norm is stable under refinement") {
    schrod::Params p{0.3, 1.0, 0};
    const auto phi = schrod::decaying_solution(p, 1.0);
    auto val = [&](int ppd, int pts) {
        auto g = RadialGrid::gauss_panels(1e-8, 40.0, ppd, pts);
        double acc = 0;
        for (int i = 0; i < g->n(); ++i) {
            const double v = phi(g->r(i));
            acc += g->weights()[i] * v * v;
        }
        return acc;
    };
    const double a = val(4, 10), b = val(8, 20);
    CHECK(std::abs(a - b) < 1e-8 * std::abs(b));
}

TEST_CASE("quad: Gauss order under panel refinement") {
    auto err = [&](int pts) {
        auto g = RadialGrid::gauss_panels(0.5, 20.0, 2, pts);
        const double exact = std::exp(-0.5) - std::exp(-20.0);
        return std::abs(radial::quad(g, [](double r) { return std::exp(-r); }).real() - exact);
    };
    const double e1 = err(4), e2 = err(8);
    CHECK(e1 / e2 >= 50.0);
}

TEST_CASE("diff: polynomial and trigonometric derivatives") {
    auto g = RadialGrid::log_uniform(1e-3, 60.0, 2048);
    auto fr2 = radial::sample(g, [](double r) { return r * r; });
    auto d1 = radial::diff(fr2, 1);
    auto d2 = radial::diff(fr2, 2);
    auto [i0, i1] = g->interior_span(0.05, 0.05);
    for (int i = i0; i < i1; ++i) {
        CHECK(std::abs(d1.v[i].real() - 2.0 * g->r(i)) < 1e-8 * 2.0 * g->r(i));
        CHECK(std::abs(d2.v[i].real() - 2.0) < 2e-7);
    }

    auto gs = RadialGrid::log_uniform(0.02, 15.0, 4096);
    auto fs = radial::sample(gs, [](double r) { return std::sin(r); });
    auto ds = radial::diff(fs, 1);
    for (int i = 0; i < gs->n(); ++i) {
        const double r = gs->r(i);
        if (r < 0.1 || r > 10.0) continue;
        CHECK(std::abs(ds.v[i].real() - std::cos(r)) < 1e-7);
    }
}

TEST_CASE("diff: fractional power against the analytic derivative") {
    auto g = RadialGrid::log_uniform(1e-4, 10.0, 2048);
    auto f = radial::sample(g, [](double r) { return std::pow(r, 0.3); });
    auto d = radial::diff(f, 1);
    auto [i0, i1] = g->interior_span(0.05, 0.05);
    for (int i = i0; i < i1; ++i) {
        const double want = 0.3 * std::pow(g->r(i), -0.7);
        CHECK(std::abs(d.v[i].real() - want) < 1e-6 * want);
    }
}

TEST_CASE("diff of the antiderivative recovers the integrand") {
    auto g = RadialGrid::log_uniform(1e-3, 30.0, 2048);
    std::vector<cplx> f(g->n());
    for (int i = 0; i < g->n(); ++i) f[i] = std::exp(-g->r(i)) * std::sin(g->r(i) + 0.3);
    const auto pre = radial::cum_prefix(*g, f);
    auto d = radial::diff(radial::RadialFn(g, pre), 1);
    auto [i0, i1] = g->interior_span(0.05, 0.05);
    for (int i = i0; i < i1; ++i)
        CHECK(std::abs(d.v[i] - f[i]) < 1e-6);
}

TEST_CASE("cumulative prefix and suffix sum to the total") {
    auto g = RadialGrid::log_uniform(1e-3, 30.0, 1024);
    std::vector<cplx> f(g->n());
    for (int i = 0; i < g->n(); ++i) f[i] = 1.0 / (1.0 + g->r(i) * g->r(i));
    const auto pre = radial::cum_prefix(*g, f);
    const auto suf = radial::cum_suffix(*g, f);
    const cplx tot = pre.back();
    for (int i = 0; i < g->n(); i += 97)
        CHECK(std::abs(pre[i] + suf[i] - tot) < 1e-12 * std::abs(tot));
}

TEST_CASE("diff: grid preconditions") {
    auto gp = RadialGrid::gauss_panels(1e-3, 10.0, 8, 6);
    std::vector<cplx> v(gp->n(), 1.0);
    CHECK_THROWS_AS(radial::diff(radial::RadialFn(gp, v), 1), GridError);
    auto g = RadialGrid::log_uniform(1e-3, 10.0, 256);
    std::vector<cplx> bad(g->n() - 1, 1.0);
    CHECK_THROWS_AS(radial::RadialFn(g, bad), ShapeError);
}

TEST_CASE("csv: fixture round trip") {
    auto g = RadialGrid::log_uniform(1e-2, 5.0, 64);
    testutil::Lcg rng;
    std::vector<cplx> v(g->n());
    for (auto& z : v) z = cplx(rng.sym(), rng.sym());
    radial::RadialFn f(g, v);
    std::stringstream ss;
    radial::write_csv(ss, f);
    auto f2 = radial::read_csv_fn(ss, g);
    for (int i = 0; i < g->n(); ++i) CHECK(f.v[i] == f2.v[i]); // %.17g is lossless

    std::vector<cplx> u(g->n()), d(g->n());
    for (auto& z : u) z = cplx(rng.sym(), rng.sym());
    for (auto& z : d) z = cplx(rng.sym(), rng.sym());
    radial::RadialSpinor sp(g, u, d);
    std::stringstream s2;
    radial::write_csv(s2, sp);
    auto sp2 = radial::read_csv_spinor(s2, g);
    for (int i = 0; i < g->n(); ++i) {
        CHECK(sp.up[i] == sp2.up[i]);
        CHECK(sp.dn[i] == sp2.dn[i]);
    }
}
