/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */
#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "support.hpp"

using namespace abspec;
using testutil::logbump;

namespace {
const schrod::Params unit{0.0, 1.0, 0};

// closed form of the squared norm derived from int_0^inf t K_nu(t)^2 dt,
// used as an independent oracle for the quadrature route
double norm_closed(double alpha, double m, double lambda, int k) {
    const double nu = alpha + k + 0.5;
    return pi * nu / (2.0 * std::sin(pi * nu) * 2.0 * m * lambda);
}
} // namespace

TEST_CASE("schrod: special solutions") {
    SECTION("alpha = 0 closed form") {
        const double kap = std::sqrt(2.0);
        const auto phi = schrod::decaying_solution(unit, 1.0);
        for (double r : {0.2, 1.0, 5.0}) {
            const double want = std::sqrt(pi / (2.0 * kap)) * std::exp(-kap * r);
            CHECK(std::abs(phi(r) - want) < 1e-12 * want);
        }
    }
    SECTION("short-distance expansion, k = 0 and k = -1") {
        // A r^{-(alpha+k)} + B r^{1+alpha+k}; the B branch leads when k = -1
        for (int k : {0, -1}) {
            const schrod::Params p{0.3, 1.0, k};
            const auto phi = schrod::decaying_solution(p, 1.0);
            const auto ac = schrod::asymptotic_constants(p, 1.0);
            const double r = 1e-5;
            const double two_term = ac.A * std::pow(r, -(p.alpha + k)) +
                                    ac.B * std::pow(r, 1.0 + p.alpha + k);
            CHECK(std::abs(phi(r) - two_term) < 1e-4 * std::abs(two_term));
        }
    }
    SECTION("large-r decay rate from the log slope") {
        const schrod::Params p{0.3, 1.0, 0};
        const double lam = 1.0;
        const double kap = std::sqrt(2.0 * lam);
        const auto phi = schrod::decaying_solution(p, lam);
        const double slope = (std::log(phi(40.0)) - std::log(phi(30.0))) / 10.0;
        CHECK(std::abs(-slope - kap) < 1e-4 * kap);
    }
    CHECK_THROWS_AS(schrod::decaying_solution(unit, -1.0), DomainError);
    // order alpha+k+1/2 exceeds the special-function range for large |k|
    CHECK_THROWS_AS(schrod::decaying_solution(schrod::Params{0.3, 1.0, 3}, 1.0)(1.0),
                    DomainError);
}

TEST_CASE("schrod: asymptotic constants") {
    SECTION("plug-in at unit parameters") {
        const auto ac = schrod::asymptotic_constants(unit, 1.0);
        CHECK(std::abs(ac.A - std::pow(2.0, -0.75) * specfun::gamma(0.5)) < 1e-14);
    }
    SECTION("algebraic rearrangement of C") {
        for (int k : {0, -1})
            for (double a : {-0.3, 0.2}) {
                const schrod::Params p{a, 1.5, k};
                const double lam = 0.7;
                const auto ac = schrod::asymptotic_constants(p, lam);
                const double s = a + k;
                const double want = std::pow(2.0, -0.5 * s - 0.25) *
                                    std::pow(lam * p.m, 0.5 * s + 0.25);
                CHECK(std::abs(ac.C * specfun::gamma(s + 1.5) - want) < 1e-13 * want);
            }
    }
    SECTION("windowed fit of the sampled solution recovers A and B") {
        // three-term oracle fit over [1e-4, 1e-3]: the r^{2-alpha} correction
        // of the A branch would otherwise contaminate the subleading term
        const schrod::Params p{0.3, 1.0, 0};
        const auto phi = schrod::decaying_solution(p, 1.0);
        const auto ac = schrod::asymptotic_constants(p, 1.0);
        auto grid = radial::RadialGrid::log_uniform(1e-6, 40.0, 2048);
        const double e1 = -p.alpha, e2 = 1.0 + p.alpha, e3 = 2.0 - p.alpha;
        double m[3][3] = {};
        double rhs[3] = {};
        for (int i = 0; i < grid->n(); ++i) {
            const double r = grid->r(i);
            if (r < 1e-4 || r > 1e-3) continue;
            const double b[3] = {std::pow(r, e1), std::pow(r, e2), std::pow(r, e3)};
            for (int a = 0; a < 3; ++a) {
                for (int bq = 0; bq < 3; ++bq) m[a][bq] += b[a] * b[bq];
                rhs[a] += b[a] * phi(r);
            }
        }
        // Cramer solve for the first two coefficients
        auto det3 = [](double a[3][3]) {
            return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                   a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                   a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        };
        const double d0 = det3(m);
        double ma[3][3], mb[3][3];
        std::memcpy(ma, m, sizeof m);
        std::memcpy(mb, m, sizeof m);
        for (int a = 0; a < 3; ++a) {
            ma[a][0] = rhs[a];
            mb[a][1] = rhs[a];
        }
        const double fitA = det3(ma) / d0, fitB = det3(mb) / d0;
        CHECK(std::abs(fitA - ac.A) < 1e-4 * std::abs(ac.A));
        CHECK(std::abs(fitB - ac.B) < 1e-4 * std::abs(ac.B));
    }
}

TEST_CASE("schrod: rank-one prefactor") {
    CHECK(schrod::tau(unit, 1.0, ExtParam::inf()) == 0.0);
    for (double a : {-0.3, 0.0, 0.3}) {
        const schrod::Params p{a, 1.0, 0};
        CHECK(std::abs(schrod::tau(p, 1.0, ExtParam::finite(0.0)) -
                       2.0 * std::cos(pi * a) / pi) < 1e-14);
    }
    CHECK_THROWS_AS(schrod::tau(unit, 0.5, ExtParam::finite(-1.0)), PoleError);
    const double want = 2.0 / (pi - pi / std::sqrt(2.0));
    CHECK(std::abs(schrod::tau(unit, 1.0, ExtParam::finite(-1.0)) - want) < 1e-13 * want);
}

TEST_CASE("schrod: green kernel") {
    SECTION("symmetry") {
        const schrod::Params p{0.3, 1.0, 0};
        const auto G = schrod::green_kernel(p, 1.0);
        testutil::Lcg rng;
        for (int q = 0; q < 20; ++q) {
            const double r = 0.05 + 5.0 * rng.uniform();
            const double s = 0.05 + 5.0 * rng.uniform();
            CHECK(std::abs(G(r, s) - G(s, r)) < 1e-12 * std::abs(G(r, s)));
        }
    }
    SECTION("alpha = 0 closed form") {
        const double m = 1.0, lam = 1.0, kap = std::sqrt(2.0 * m * lam);
        const auto G = schrod::green_kernel(unit, lam);
        for (auto [r, s] : std::vector<std::pair<double, double>>{{0.5, 1.5}, {2.0, 0.3}}) {
            const double want =
                (m / kap) * (std::exp(-kap * std::abs(r - s)) - std::exp(-kap * (r + s)));
            CHECK(std::abs(G(r, s) - want) < 1e-12 * want);
        }
    }
}

TEST_CASE("schrod: block action") {
    SECTION("eigen-equation of the decaying solution") {
        const schrod::Params p{0.3, 1.0, 0};
        const double lam = 1.0;
        auto grid = radial::RadialGrid::log_uniform(1e-6, 40.0, 2048);
        const auto phi = schrod::decaying_solution(p, lam);
        auto f = radial::sample(grid, [&](double r) { return phi(r); });
        auto sf = schrod::apply(p, f);
        auto [i0, i1] = grid->interior_span(0.55, 0.12);
        for (int i = i0; i < i1; ++i)
            CHECK(std::abs(sf.v[i] + lam * f.v[i]) < 1e-6 * std::abs(f.v[i]));
    }
    SECTION("exact zero-energy kernel elements") {
        const schrod::Params p{0.3, 1.0, 0};
        auto grid = radial::RadialGrid::log_uniform(1e-4, 10.0, 1024);
        for (double e : {-p.alpha, 1.0 + p.alpha}) {
            auto f = radial::sample(grid, [&](double r) { return std::pow(r, e); });
            auto sf = schrod::apply(p, f);
            auto [i0, i1] = grid->interior_span(0.1, 0.1);
            for (int i = i0; i < i1; ++i) {
                const double r = grid->r(i);
                const double scale =
                    p.alpha * (p.alpha + 1.0) / (2.0 * p.m * r * r) * std::pow(r, e);
                CHECK(std::abs(sf.v[i]) < 1e-7 * scale);
            }
        }
    }
}

TEST_CASE("schrod: resolvent") {
    SECTION("residual identity at the default grid") {
        CHECK(testutil::schrod_residual(0.3, 1.0, 1.0, ExtParam::finite(-1.0), 2048) < 1e-6);
        CHECK(testutil::schrod_residual(-0.3, 1.0, 1.0, ExtParam::inf(), 2048) < 1e-6);
    }
    SECTION("Friedrichs case agrees with dense kernel quadrature") {
        const schrod::Params p{0.25, 1.0, 0};
        const double lam = 0.9;
        auto grid = radial::RadialGrid::log_uniform(1e-6, 50.0, 2048);
        auto g = radial::sample(grid, [](double r) { return logbump(r, 0.4, 3.0); });
        auto u = schrod::resolvent(p, lam, ExtParam::inf(), g);
        const auto G = schrod::green_kernel(p, lam);
        auto quad_grid = radial::RadialGrid::gauss_panels(0.3, 4.0, 24, 8);
        for (double r_target : {0.1, 0.9, 2.2, 6.0}) {
            int best = 0;
            for (int i = 0; i < grid->n(); ++i)
                if (std::abs(grid->r(i) - r_target) < std::abs(grid->r(best) - r_target))
                    best = i;
            const double r = grid->r(best);
            // split the quadrature at the kernel kink rho = r
            cplx want = 0.0;
            std::vector<radial::GridPtr> pieces;
            if (r > 0.31 && r < 3.99) {
                pieces.push_back(radial::RadialGrid::gauss_panels(0.3, r, 24, 8));
                pieces.push_back(radial::RadialGrid::gauss_panels(r, 4.0, 24, 8));
            } else {
                pieces.push_back(quad_grid);
            }
            for (const auto& piece : pieces)
                for (int j = 0; j < piece->n(); ++j) {
                    const double rho = piece->r(j);
                    want += piece->weights()[j] * G(r, rho) * logbump(rho, 0.4, 3.0);
                }
            CHECK(std::abs(u.v[best] - want) < 2e-7);
        }
    }
    SECTION("extracted boundary slope equals theta") {
        for (double th : {-1.0, 0.7}) {
            const schrod::Params p{0.25, 1.0, 0};
            auto grid = radial::RadialGrid::log_uniform(1e-6, 45.0, 2048);
            auto g = radial::sample(grid, [](double r) { return logbump(r, 0.4, 3.0); });
            auto u = schrod::resolvent(p, 1.0, ExtParam::finite(th), g);
            const auto bd = schrod::fit_boundary_data(p, u);
            CHECK(std::abs(bd.sublead / bd.lead - th) < 1e-3 * std::max(1.0, std::abs(th)));
        }
    }
    SECTION("k = -1 supports the Friedrichs extension only") {
        const schrod::Params p{0.2, 1.0, -1};
        CHECK(testutil::schrod_residual(0.2, 1.0, 1.0, ExtParam::inf(), 2048, -1) < 1e-6);
        auto grid = radial::RadialGrid::log_uniform(1e-4, 30.0, 256);
        auto g = radial::sample(grid, [](double r) { return logbump(r, 0.4, 3.0); });
        CHECK_THROWS_AS(schrod::resolvent(p, 1.0, ExtParam::finite(0.3), g), DomainError);
    }
}

TEST_CASE("schrod: bound state") {
    SECTION("closed-form anchor") {
        const auto e = schrod::bound_state(unit, ExtParam::finite(-1.0));
        REQUIRE(e.has_value());
        CHECK(std::abs(*e + 0.5) < 1e-8);
    }
    SECTION("independent bisection oracle") {
        const schrod::Params p{0.3, 1.0, 0};
        const double th = -1.0;
        const auto e = schrod::bound_state(p, ExtParam::finite(th));
        REQUIRE(e.has_value());
        auto den = [&](double lam) {
            return pi / std::cos(pi * p.alpha) +
                   std::pow(2.0, 0.5 + p.alpha) * std::pow(p.m * lam, -0.5 - p.alpha) *
                       static_cast<double>(oracle::gamma(0.5L + static_cast<long double>(p.alpha)) *
                                           oracle::gamma(1.5L + static_cast<long double>(p.alpha))) *
                       th;
        };
        double lo = 1e-6, hi = 1e3;
        REQUIRE(den(lo) < 0.0);
        REQUIRE(den(hi) > 0.0);
        while (hi - lo > 1e-13 * hi) {
            const double mid = std::sqrt(lo * hi);
            (den(mid) < 0.0 ? lo : hi) = mid;
        }
        CHECK(std::abs(*e + 0.5 * (lo + hi)) < 1e-10);
    }
    SECTION("existence iff theta negative") {
        testutil::Lcg rng;
        for (int q = 0; q < 50; ++q) {
            const double a = -0.45 + 0.9 * rng.uniform();
            const double th = -4.0 + 8.0 * rng.uniform();
            const schrod::Params p{a, 1.0, 0};
            CHECK(schrod::bound_state(p, ExtParam::finite(th)).has_value() == (th < 0.0));
        }
        CHECK_FALSE(schrod::bound_state(unit, ExtParam::inf()).has_value());
        CHECK_FALSE(schrod::bound_state(unit, ExtParam::finite(1.0)).has_value());
    }
}

TEST_CASE("schrod: scattering length") {
    for (double a : {-0.3, 0.0, 0.3})
        CHECK(schrod::scattering_length(schrod::Params{a, 1.0, 0}, -1.0) == 1.0);
    CHECK(std::abs(schrod::scattering_length(unit, -8.0) - 0.125) < 1e-15);
    CHECK_THROWS_AS(schrod::scattering_length(unit, 0.0), DomainError);
    SECTION("node of the zero-energy solution") {
        const double a = 0.2, th = -2.3;
        const double want = schrod::scattering_length(schrod::Params{a, 1.0, 0}, th);
        // u = r^{-a} + th r^{1+a} vanishes where r^{1+2a} = -1/th
        const double node = std::pow(-1.0 / th, 1.0 / (1.0 + 2.0 * a));
        CHECK(std::abs(want - node) < 1e-10 * node);
        CHECK(std::abs(std::pow(node, -a) + th * std::pow(node, 1.0 + a)) < 1e-12);
    }
}

TEST_CASE("schrod: norm quadrature against the closed-form oracle") {
    for (int k : {0, -1})
        for (double a : {-0.3, 0.0, 0.3})
            for (double lam : {0.5, 2.0}) {
                const schrod::Params p{a, 1.3, k};
                const double got = schrod::decaying_norm_sq(p, lam);
                const double want = norm_closed(a, p.m, lam, k);
                CHECK(std::abs(got - want) < 1e-9 * want);
            }
}

TEST_CASE("schrod: boundary data and the omega relabelling") {
    const double lam = 1.1;
    SECTION("Friedrichs data") {
        const auto bd = schrod::boundary_from_coeffs(schrod::Params{0.2, 1.0, 0}, lam, 0.0,
                                                     cplx(0.3, 1.0));
        CHECK(bd.lead == cplx(0.0));
    }
    SECTION("slope matches theta(omega), k = 0") {
        const schrod::Params p{0.2, 1.0, 0};
        for (double w : {-1.5, 0.4, 2.0}) {
            const cplx c0(0.7, 0.1);
            const auto bd = schrod::boundary_from_coeffs(p, lam, c0, w * c0);
            const double th = schrod::theta_from_omega(p, lam, ExtParam::finite(w)).value();
            CHECK(std::abs(bd.sublead - th * bd.lead) < 1e-10 * std::abs(bd.lead));
        }
    }
    SECTION("slope matches nu(omega), k = -1") {
        const schrod::Params p{0.2, 1.0, -1};
        for (double w : {-0.8, 1.2}) {
            const cplx c0(1.0, -0.4);
            const auto bd = schrod::boundary_from_coeffs(p, lam, c0, w * c0);
            const double nu = schrod::theta_from_omega(p, lam, ExtParam::finite(w)).value();
            CHECK(std::abs(bd.sublead - nu * bd.lead) < 1e-10 * std::abs(bd.lead));
        }
    }
    SECTION("omega route reproduces the prefactor") {
        const schrod::Params p{0.25, 1.0, 0};
        for (double w : {-0.9, 1.7}) {
            const double th = schrod::theta_from_omega(p, lam, ExtParam::finite(w)).value();
            const double via_omega =
                1.0 / (2.0 * p.m * w * schrod::decaying_norm_sq(p, lam));
            CHECK(std::abs(schrod::tau(p, lam, ExtParam::finite(th)) - via_omega) <
                  1e-8 * std::abs(via_omega));
        }
        CHECK(schrod::theta_from_omega(p, lam, ExtParam::inf()).is_inf());
        const double th0 = schrod::theta_from_omega(p, lam, ExtParam::finite(0.5)).value();
        CHECK(std::abs(schrod::omega_from_theta(p, lam, ExtParam::finite(th0)).value() - 0.5) <
              1e-10);
    }
}
