/* This file is part of the abspec library.
 * SPDX-License-Identifier: Apache-2.0
 */

// Command-line front end: eigenvalues, scattering lengths, resolvent residual
// checks, partial-wave invariants, square boundary maps, and the c-sweep
// convergence tables, all emitted as CSV.
//
// Exit codes: 0 ok, 2 validation failure, 3 missing result, 4 numerical
// failure (pole collision or non-convergence).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abspec/abspec.hpp"

using namespace abspec;
using nlohmann::json;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ExtParam parse_ext(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF" || s == "+inf") return ExtParam::inf();
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw DomainError("cannot parse extension parameter: " + s);
    return ExtParam::finite(v);
}

std::vector<ExtParam> parse_ext_list(const std::string& s) {
    std::vector<ExtParam> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_ext(tok));
    if (out.empty()) throw DomainError("empty parameter list");
    return out;
}

std::vector<double> parse_sweep(const std::string& s) {
    if (s.empty()) return nonrel::default_c_sweep();
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

struct Output {
    std::string path;
    std::ostringstream csv;

    int flush(const std::string& cmd, size_t rows) {
        if (path.empty()) {
            std::cout << csv.str();
            std::cerr << cmd << ": " << rows << " rows -> stdout\n";
        } else {
            std::ofstream os(path, std::ios::binary);
            if (!os) {
                std::cerr << cmd << ": cannot open " << path << "\n";
                return 2;
            }
            os << csv.str();
            std::cout << cmd << ": " << rows << " rows -> " << path << "\n";
        }
        return 0;
    }
};

double logbump(double r, double a, double b) {
    return radial::bump(std::log(r), std::log(a), std::log(b));
}

// L2 residual over an interior window, relative to the data norm.
double dirac_residual(double alpha, double m, double c, double lambda, const ExtParam& g,
                      int n) {
    dirac::Params p{alpha, m, c, 0};
    const double rate = dirac::mu(p, lambda) * std::sqrt(lambda);
    auto grid = radial::RadialGrid::log_uniform(1e-6, 60.0 / rate, n);
    auto data = radial::sample_spinor(grid, [](double r) {
        return std::array<cplx, 2>{cplx(logbump(r, 0.04, 10.0)),
                                   cplx(0.5 * logbump(r, 0.08, 6.0))};
    });
    auto u = dirac::resolvent(p, lambda, g, data);
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

double schrod_residual(double alpha, double m, double lambda, const ExtParam& th, int n) {
    schrod::Params p{alpha, m, 0};
    const double rate = std::sqrt(2.0 * m * lambda);
    auto grid = radial::RadialGrid::log_uniform(1e-6, 60.0 / rate, n);
    auto data = radial::sample(grid, [](double r) { return logbump(r, 0.4, 3.0); });
    auto u = schrod::resolvent(p, lambda, th, data);
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

void write_table(Output& out, const nonrel::ConvergenceTable& t) {
    t.to_csv(out.csv);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-adjoint Aharonov-Bohm operator toolkit"};
    app.require_subcommand(1);

    // shared option storage
    std::string out_path, config_path, family = "both", sweep_str, metric = "resolvent-norm";
    std::string gamma_str = "inf", theta_str = "inf", block = "full";
    double alpha = 0.0, m = 1.0, c = 1.0, lambda = 1.0;
    int grid_n = 2048, n_theta = 64, grid_ppd = 24, grid_pts = 8;
    bool lambda_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--out", out_path, "output CSV path (default stdout)");
        sub->add_option("--alpha", alpha, "flux parameter in (-0.499, 0.499)");
        sub->add_option("--m", m, "mass");
    };

    auto* eig = app.add_subcommand("eig", "gap/bound-state eigenvalue");
    add_common(eig);
    eig->add_option("--family", family, "dirac or schrod")->required();
    eig->add_option("--c", c, "light speed (dirac)");
    eig->add_option("--gamma", gamma_str, "Dirac extension parameter or 'inf'");
    eig->add_option("--theta", theta_str, "Schroedinger extension parameter or 'inf'");

    auto* scat = app.add_subcommand("scatlen", "scattering lengths along the schedule");
    add_common(scat);
    scat->add_option("--theta", theta_str, "target extension parameter (negative)");
    scat->add_option("--c-sweep", sweep_str, "comma-separated light speeds");

    auto* taul = app.add_subcommand("tau-limit", "prefactor convergence table");
    add_common(taul);
    taul->add_option("--theta", theta_str);
    taul->add_option("--lambda", lambda);
    taul->add_option("--c-sweep", sweep_str);

    auto* kern = app.add_subcommand("kernel-limit", "kernel convergence tables");
    add_common(kern);
    kern->add_option("--metric", metric, "rank-one or resolvent-norm");
    kern->add_option("--theta", theta_str);
    kern->add_option("--lambda", lambda)->each([&](const std::string&) { lambda_set = true; });
    kern->add_option("--c-sweep", sweep_str);
    kern->add_option("--block", block, "full, lower-right (rank-one) or upper-left");
    kern->add_option("--grid-ppd", grid_ppd, "quadrature panels per decade");
    kern->add_option("--grid-pts", grid_pts, "points per panel");

    auto* eigl = app.add_subcommand("eig-limit", "gap-eigenvalue convergence table");
    add_common(eigl);
    eigl->add_option("--theta", theta_str)->required();
    eigl->add_option("--c-sweep", sweep_str);

    auto* posl = app.add_subcommand("positron-limit", "positron prefactor convergence");
    add_common(posl);
    posl->add_option("--theta", theta_str)->required();
    posl->add_option("--lambda", lambda);
    posl->add_option("--c-sweep", sweep_str);

    auto* resc = app.add_subcommand("resolvent-check", "resolvent residual norms");
    add_common(resc);
    resc->add_option("--family", family, "dirac, schrod or both");
    resc->add_option("--c", c);
    resc->add_option("--lambda", lambda);
    resc->add_option("--gamma", gamma_str, "comma list, 'inf' allowed");
    resc->add_option("--theta", theta_str, "comma list, 'inf' allowed");
    resc->add_option("--grid-n", grid_n);

    auto* pwr = app.add_subcommand("pw-roundtrip", "partial-wave invariant suite");
    add_common(pwr);
    pwr->add_option("--c", c);
    pwr->add_option("--n-theta", n_theta);
    pwr->add_option("--grid-n", grid_n);

    auto* sqc = app.add_subcommand("square-check", "square boundary map and residual");
    add_common(sqc);
    sqc->add_option("--c", c);
    sqc->add_option("--gamma", gamma_str, "comma list, 'inf' allowed");
    sqc->add_option("--grid-n", grid_n);

    // JSON config: inject values for flags absent from the command line.
    {
        std::vector<std::string> args(argv + 1, argv + argc);
        for (size_t i = 0; i + 1 < args.size(); ++i)
            if (args[i] == "--config") config_path = args[i + 1];
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) {
                std::cerr << "cannot open config " << config_path << "\n";
                return 2;
            }
            json cfg;
            try {
                is >> cfg;
            } catch (const std::exception& e) {
                std::cerr << "config parse error: " << e.what() << "\n";
                return 2;
            }
            std::vector<std::string> merged = args;
            for (auto it = cfg.begin(); it != cfg.end(); ++it) {
                const std::string flag = "--" + it.key();
                bool present = false;
                for (const auto& a : args)
                    if (a == flag) present = true;
                if (present) continue;
                merged.push_back(flag);
                merged.push_back(it.value().is_string()
                                     ? it.value().get<std::string>()
                                     : json(it.value()).dump());
            }
            std::vector<const char*> cargs;
            cargs.push_back(argv[0]);
            for (const auto& a : merged) cargs.push_back(a.c_str());
            try {
                app.parse(static_cast<int>(cargs.size()), cargs.data());
            } catch (const CLI::ParseError& e) {
                app.exit(e);
                return 2;
            }
            goto parsed;
        }
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }
    }
parsed:

    Output out;
    out.path = out_path;
    try {
        check_alpha(alpha);
        if (!(m > 0.0)) throw DomainError("m must be positive");

        if (eig->parsed()) {
            out.csv << "family,alpha,param,energy\n";
            size_t rows = 0;
            if (family == "dirac") {
                if (!(c > 0.0)) throw DomainError("c must be positive");
                dirac::Params p{alpha, m, c, 0};
                const ExtParam g = parse_ext(gamma_str);
                if (auto lam = dirac::gap_eigenvalue(p, g)) {
                    out.csv << "dirac," << fmt(alpha) << ',' << g.str() << ',' << fmt(-*lam)
                            << '\n';
                    ++rows;
                }
            } else if (family == "schrod") {
                schrod::Params p{alpha, m, 0};
                const ExtParam th = parse_ext(theta_str);
                if (auto e = schrod::bound_state(p, th)) {
                    out.csv << "schrod," << fmt(alpha) << ',' << th.str() << ',' << fmt(*e)
                            << '\n';
                    ++rows;
                }
            } else {
                throw DomainError("--family must be dirac or schrod");
            }
            return out.flush("eig", rows);
        }

        if (scat->parsed()) {
            const ExtParam th = parse_ext(theta_str);
            if (th.is_inf() || !(th.value() < 0.0))
                throw DomainError("scatlen: theta must be finite and negative");
            const auto cs = parse_sweep(sweep_str);
            schrod::Params ps{alpha, m, 0};
            const double rs = schrod::scattering_length(ps, th.value());
            out.csv << "c,gamma,r_dirac,r_schrod,rel_diff\n";
            for (double cc : cs) {
                dirac::Params pd{alpha, m, cc, 0};
                const ExtParam g = nonrel::gamma_schedule(th, alpha, m, cc);
                const double rd = dirac::scattering_length(pd, g.value());
                out.csv << fmt(cc) << ',' << fmt(g.value()) << ',' << fmt(rd) << ','
                        << fmt(rs) << ',' << fmt(std::abs(rd - rs) / rs) << '\n';
            }
            return out.flush("scatlen", cs.size());
        }

        if (taul->parsed()) {
            nonrel::LimitRun run{parse_ext(theta_str), alpha, m, lambda,
                                 parse_sweep(sweep_str), nullptr};
            const auto t = nonrel::tau_convergence(run);
            write_table(out, t);
            return out.flush("tau-limit", t.rows.size());
        }

        if (kern->parsed()) {
            const auto cs = parse_sweep(sweep_str);
            const ExtParam th = parse_ext(theta_str);
            if (metric == "rank-one") {
                nonrel::LimitRun run{th, alpha, m, lambda, cs, nullptr};
                const auto which = block == "lower-right" ? nonrel::RankOneBlock::lower_right
                                                          : nonrel::RankOneBlock::full;
                const auto t = nonrel::rank_one_convergence(run, which);
                write_table(out, t);
                return out.flush("kernel-limit", t.rows.size());
            }
            if (metric == "resolvent-norm") {
                const double lam = lambda_set
                                       ? lambda
                                       : nonrel::choose_lambda(th, alpha, m, cs);
                nonrel::LimitRun run{th, alpha, m, lam, cs,
                                     nonrel::default_norm_grid(m, lam, grid_ppd, grid_pts)};
                const auto t =
                    nonrel::resolvent_norm_convergence(run, block == "upper-left");
                write_table(out, t);
                return out.flush("kernel-limit", t.rows.size());
            }
            throw DomainError("--metric must be rank-one or resolvent-norm");
        }

        if (eigl->parsed()) {
            const ExtParam th = parse_ext(theta_str);
            if (th.is_inf()) throw DomainError("eig-limit: theta must be finite");
            const auto t = nonrel::eigenvalue_convergence(th.value(), alpha, m,
                                                          parse_sweep(sweep_str));
            write_table(out, t);
            return out.flush("eig-limit", t.rows.size());
        }

        if (posl->parsed()) {
            const auto t = nonrel::positron_tau_convergence(parse_ext(theta_str), alpha, m,
                                                            lambda, parse_sweep(sweep_str));
            write_table(out, t);
            return out.flush("positron-limit", t.rows.size());
        }

        if (resc->parsed()) {
            out.csv << "family,alpha,param,residual\n";
            size_t rows = 0;
            if (family == "dirac" || family == "both") {
                if (!(c > 0.0)) throw DomainError("c must be positive");
                for (const auto& g : parse_ext_list(gamma_str)) {
                    out.csv << "dirac," << fmt(alpha) << ',' << g.str() << ','
                            << fmt(dirac_residual(alpha, m, c, lambda, g, grid_n)) << '\n';
                    ++rows;
                }
            }
            if (family == "schrod" || family == "both") {
                for (const auto& th : parse_ext_list(theta_str)) {
                    out.csv << "schrod," << fmt(alpha) << ',' << th.str() << ','
                            << fmt(schrod_residual(alpha, m, lambda, th, grid_n)) << '\n';
                    ++rows;
                }
            }
            if (rows == 0) throw DomainError("--family must be dirac, schrod or both");
            return out.flush("resolvent-check", rows);
        }

        if (pwr->parsed()) {
            if (!(c > 0.0)) throw DomainError("c must be positive");
            auto grid = radial::RadialGrid::log_uniform(1e-3, 20.0, grid_n);
            auto ring = [](double r) { return std::exp(-0.5 * std::pow((r - 2.0) / 0.5, 2)); };
            auto f = pw::PolarField::zeros(grid, n_theta, 1);
            auto sp = pw::PolarField::zeros(grid, n_theta, 2);
            for (int i = 0; i < grid->n(); ++i)
                for (int j = 0; j < n_theta; ++j) {
                    const double r = grid->r(i), t = f.theta(j);
                    f.at(0, i, j) = ring(r) * (1.0 + 0.6 * std::exp(-iu * t) +
                                               0.3 * std::exp(2.0 * iu * t));
                    sp.at(0, i, j) = ring(r) * (0.8 + 0.5 * std::exp(-2.0 * iu * t));
                    sp.at(1, i, j) =
                        ring(r) * (0.7 * std::exp(iu * t) + 0.4 * std::exp(-iu * t));
                }
            auto l2diff = [](const pw::PolarField& a, const pw::PolarField& b) {
                double d = 0, n = 0;
                for (size_t q = 0; q < a.data.size(); ++q) {
                    d += std::norm(a.data[q] - b.data[q]);
                    n += std::norm(a.data[q]);
                }
                return std::sqrt(d / n);
            };
            const auto bs = pw::decompose_scalar(f);
            const auto bsp = pw::decompose_spinor(sp);
            double par_s = 0, fld_s = 0;
            for (int bb = 0; bb < bs.nblocks; ++bb) par_s += bs.block_norm_sq(bb);
            for (int i = 0; i < grid->n(); ++i)
                for (int j = 0; j < n_theta; ++j)
                    fld_s += grid->weights()[i] * grid->r(i) * std::norm(f.at(0, i, j)) *
                             (2.0 * pi / n_theta);
            // leakage of a pure mode through decompose-apply-reconstruct
            auto fk = pw::PolarField::zeros(grid, n_theta, 1);
            for (int i = 0; i < grid->n(); ++i)
                for (int j = 0; j < n_theta; ++j)
                    fk.at(0, i, j) = ring(grid->r(i)) * std::exp(-2.0 * iu * fk.theta(j));
            auto bk = pw::decompose_scalar(pw::apply_via_blocks(fk, schrod::Params{alpha, m, 0}));
            double tot = 0, other = 0;
            for (int bb = 0; bb < bk.nblocks; ++bb) {
                const double nn = bk.block_norm_sq(bb);
                tot += nn;
                if (bk.k_of(bb) != 2) other += nn;
            }
            out.csv << "check,value\n";
            out.csv << "roundtrip_scalar," << fmt(l2diff(f, pw::reconstruct_scalar(bs))) << '\n';
            out.csv << "roundtrip_spinor," << fmt(l2diff(sp, pw::reconstruct_spinor(bsp))) << '\n';
            out.csv << "parseval_scalar," << fmt(std::abs(par_s - fld_s) / fld_s) << '\n';
            out.csv << "leakage_schrod," << fmt(other / tot) << '\n';
            return out.flush("pw-roundtrip", 4);
        }

        if (sqc->parsed()) {
            if (!(c > 0.0)) throw DomainError("c must be positive");
            dirac::Params p{alpha, m, c, 0};
            auto grid = radial::RadialGrid::log_uniform(1e-4, 10.0, grid_n);
            out.csv << "gamma,b0_re,b0_im,a1_re,a1_im,residual\n";
            size_t rows = 0;
            for (const auto& g : parse_ext_list(gamma_str)) {
                const cplx a0 = g.is_inf() ? cplx(0.0) : cplx(1.0);
                const cplx b1 = 0.0;
                const auto [b0, a1] = dirac::square_boundary_map(p, g, a0, b1);
                // smooth plateau cutoff, identically 1 near the origin
                auto cutf = [](double r) {
                    if (r <= 1.0) return 1.0;
                    if (r >= 6.0) return 0.0;
                    const double t = (r - 1.0) / 5.0;
                    const double qa = std::exp(-1.0 / t), qb = std::exp(-1.0 / (1.0 - t));
                    return qb / (qa + qb);
                };
                std::vector<cplx> up(grid->n()), dn(grid->n());
                for (int i = 0; i < grid->n(); ++i) {
                    const double r = grid->r(i), cf = cutf(r);
                    up[i] = (a0 * std::pow(r, -alpha) + a1 * std::pow(r, 1.0 + alpha)) * cf;
                    dn[i] = (b0 * std::pow(r, alpha) + b1 * std::pow(r, 1.0 - alpha)) * cf;
                    if (g.is_inf()) up[i] += std::pow(r, 1.0 + alpha) * cf; // reduced data
                }
                radial::RadialSpinor u(grid, std::move(up), std::move(dn));
                const auto h2 = dirac::apply(p, dirac::apply(p, u));
                const auto s_up = schrod::apply(schrod::Params{alpha, m, 0},
                                                radial::RadialFn(grid, u.up));
                const auto s_dn = schrod::apply(schrod::Params{-alpha, m, 0},
                                                radial::RadialFn(grid, u.dn));
                const double mc2 = m * c * c;
                auto [i0, i1] = grid->interior_span(0.3, 0.1);
                const auto& w = grid->weights();
                double rn = 0, un = 0;
                for (int i = i0; i < i1; ++i) {
                    const cplx tu = 2.0 * mc2 * s_up.v[i] + mc2 * mc2 * u.up[i];
                    const cplx td = 2.0 * mc2 * s_dn.v[i] + mc2 * mc2 * u.dn[i];
                    rn += w[i] * (std::norm(h2.up[i] - tu) + std::norm(h2.dn[i] - td));
                    un += w[i] * (std::norm(tu) + std::norm(td));
                }
                out.csv << g.str() << ',' << fmt(b0.real()) << ',' << fmt(b0.imag()) << ','
                        << fmt(a1.real()) << ',' << fmt(a1.imag()) << ','
                        << fmt(std::sqrt(rn / un)) << '\n';
                ++rows;
            }
            return out.flush("square-check", rows);
        }

        std::cerr << "no subcommand\n";
        return 2;
    } catch (const MissingEigenvalue& e) {
        std::cerr << "missing result: " << e.what() << "\n";
        return 3;
    } catch (const PoleError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const EigenvalueCollision& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    }
}
