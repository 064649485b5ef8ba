#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ftlab/acceptance.hpp"
#include "ftlab/errors.hpp"
#include "ftlab/maps.hpp"
#include "ftlab/measures.hpp"
#include "ftlab/report.hpp"
#include "ftlab/spectral.hpp"
#include "ftlab/thermo.hpp"
#include "ftlab/zeta.hpp"

using namespace ftlab;
using report::Table;
using json = nlohmann::json;

namespace {

struct Config {
    std::string command;
    std::vector<double> r{0.5};
    std::string r_grid;
    int q = 0;
    int N = 50;
    int n = 8;
    std::string beta_grid = "-3:1:0.5";
    std::string z_grid = "0.5";
    std::string s_grid = "0:1:0.25";
    std::uint64_t seed = 20261018;
    std::string format = "csv";
    std::string out;
    bool no_timestamp = false;
    std::string mode = "G";
    double iters = 1e6;
    std::string op = "MN";
};

// "lo:hi:step" or a comma list
std::vector<double> parse_grid(const std::string& s, const char* what) {
    std::vector<double> v;
    if (s.find(':') != std::string::npos) {
        double lo, hi, h;
        char c1, c2;
        std::istringstream is(s);
        if (!(is >> lo >> c1 >> hi >> c2 >> h) || c1 != ':' || c2 != ':' || !(h > 0) || hi < lo)
            throw CLI::ValidationError(what, "expected lo:hi:step with step > 0 and lo <= hi");
        const long long n = std::llround(std::floor((hi - lo) / h + 1e-9));
        for (long long i = 0; i <= n; ++i) v.push_back(lo + i * h);
    } else {
        std::istringstream is(s);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                v.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw CLI::ValidationError(what, "not a number: '" + tok + "'");
            }
        }
    }
    if (v.empty()) throw CLI::ValidationError(what, "grid is empty");
    return v;
}

std::vector<double> r_values(const Config& c) {
    const std::vector<double> v = c.r_grid.empty() ? c.r : parse_grid(c.r_grid, "--r-grid");
    for (double r : v)
        if (!(r >= 0.0 && r <= 1.0)) throw CLI::ValidationError("--r", "r must lie in [0,1]");
    return v;
}

json config_json(const Config& c) {
    json j = {{"command", c.command}, {"r", r_values(c)}, {"seed", c.seed}, {"format", c.format}};
    if (c.command == "spectrum" || c.command == "zeta") {
        j["q"] = c.q;
        j["N"] = c.N;
    }
    if (c.command == "spectrum") j["op"] = c.op;
    if (c.command == "thermo") {
        j["n"] = c.n;
        j["beta_grid"] = parse_grid(c.beta_grid, "--beta-grid");
        j["quadrature_order"] = thermo::default_quadrature_order;
    }
    if (c.command == "zeta") {
        j["z"] = parse_grid(c.z_grid, "--z");
        j["s_grid"] = parse_grid(c.s_grid, "--s-grid");
        j["n_max"] = zeta::default_n_max;
        j["digit_cutoff"] = 60;
    }
    if (c.command == "map") j["n"] = c.n;
    if (c.command == "measure" || c.command == "map") {
        j["mode"] = c.mode;
        j["iters"] = static_cast<long long>(c.iters);
    }
    return j;
}

void emit(const Config& c, const Table& t, json extra = json::object()) {
    json cfg = config_json(c);
    for (auto& [k, v] : extra.items()) cfg[k] = v;
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw std::runtime_error("cannot open output file " + c.out);
        os = &file;
    }
    if (c.format == "json")
        report::write_json(*os, {{"rows", report::table_json(t)}}, cfg, !c.no_timestamp);
    else
        report::write_csv(*os, t, cfg, !c.no_timestamp);
}

long long iters(const Config& c) {
    if (!(c.iters >= 2 && c.iters <= 1e12)) throw CLI::ValidationError("--iters", "must lie in [2, 1e12]");
    return static_cast<long long>(c.iters);
}

void cmd_map(const Config& c) {
    Table t{{"r", "quantity", "index", "value", "std_error"}, {}};
    const double nan = std::nan("");
    for (double r : r_values(c)) {
        const Params p(r);
        t.add({r, std::string("x1"), 0LL, maps::fixed_point_x1(p), nan});
        for (int k = 0; k <= c.n; ++k) t.add({r, std::string("c_n"), (long long)k, maps::partition_point_c(p, k), nan});
        // one orbit from a seeded start
        Rng rng(c.seed, Rng::sample);
        double x = rng.uniform();
        for (int k = 0; k <= c.n; ++k) {
            t.add({r, std::string("orbit"), (long long)k, x, nan});
            x = maps::map_eval(p, x);
        }
        t.add({r, std::string("kac_expected_return"), 0LL, measures::kac_expected_return(p), nan});
        if (r < 1.0) {
            const OrbitStats s = measures::kac_monte_carlo(p, iters(c), c.seed);
            t.add({r, std::string("tau_mean_monte_carlo"), s.n_samples, s.mean, s.std_error()});
        }
    }
    emit(c, t);
}

void cmd_measure(const Config& c) {
    if (c.mode != "F" && c.mode != "G") throw CLI::ValidationError("--mode", "must be F or G");
    const BirkhoffMode mode = c.mode == "F" ? BirkhoffMode::F_under_nu : BirkhoffMode::G_under_mu;
    Table t{{"r", "quantity", "x", "value", "std_error"}, {}};
    const double nan = std::nan("");
    for (double r : r_values(c)) {
        const Params p(r);
        t.add({r, std::string("K"), nan, measures::normalizer_K(p), nan});
        t.add({r, std::string("nu_total"), nan, measures::nu_total(p), nan});
        t.add({r, std::string("kac_expected_return"), nan, measures::kac_expected_return(p), nan});
        const double chi = measures::lyapunov_closed(p);
        t.add({r, std::string("lyapunov_closed"), nan, chi, nan});
        if (mode == BirkhoffMode::F_under_nu && r < 1.0)
            t.add({r, std::string("lambda_closed"), nan, chi / measures::nu_total(p), nan});
        const OrbitStats s = measures::lyapunov_birkhoff(p, mode, iters(c), 1000, c.seed);
        t.add({r, std::string("lyapunov_birkhoff_") + c.mode, nan, s.mean, s.std_error()});
        const auto e = measures::density(p, DensityKind::e), h = measures::density(p, DensityKind::h);
        for (int i = 1; i <= 20; ++i) {
            const double x = i / 20.0;
            t.add({r, std::string("density_e"), x, e(x), nan});
            t.add({r, std::string("density_h"), x, h(x), nan});
        }
    }
    emit(c, t);
}

void cmd_thermo(const Config& c) {
    const auto betas = parse_grid(c.beta_grid, "--beta-grid");
    for (double b : betas)
        if (b < -4 || b > 2) throw CLI::ValidationError("--beta-grid", "beta must lie in [-4, 2]");
    Table t{{"r", "beta", "n", "f_n", "delta_prev", "envelope_lower", "envelope_upper", "ess_radius_lower_k1",
             "ess_radius_upper_k1"},
            {}};
    for (double r : r_values(c)) {
        const Params p(r);
        const double lr = std::log(p.rho()), g = thermo::gamma_r(p);
        const RadiusBounds rb = thermo::ess_radius_bounds(p, 1);
        for (double beta : betas) {
            const FreeEnergyEstimate fe = thermo::free_energy(p, beta, c.n);
            // for beta <= 0 the bounds read beta(log rho + gamma) <= f <= beta log rho
            const double a = beta * (lr + g), b = beta * lr;
            t.add({r, beta, (long long)c.n, fe.f_n, fe.delta_prev, std::min(a, b), std::max(a, b), rb.lower, rb.upper});
        }
    }
    emit(c, t);
}

void cmd_spectrum(const Config& c) {
    if (c.op != "M" && c.op != "N" && c.op != "P" && c.op != "MN")
        throw CLI::ValidationError("--op", "must be M, N, P or MN");
    Table t{{"value", "imag", "operator", "k", "closed_form", "stability_delta", "r", "q", "N"}, {}};
    json traces = json::array();
    const double nan = std::nan("");
    for (double r : r_values(c)) {
        const Params p(r);
        const BasisSpec plain{c.q, c.N, 1.0};
        const BasisSpec adapted = BasisSpec::adapted(p, c.q, c.N);
        struct Row {
            std::complex<double> v;
            const char* op;
            long long k;
            double closed, delta;
        };
        std::vector<Row> rows;
        auto add = [&](const std::vector<SpectralEntry>& s, const char* op, auto closed) {
            for (std::size_t i = 0; i < s.size(); ++i)
                rows.push_back({s[i].value, op, (long long)i + 1, closed(int(i) + 1), s[i].stability_delta});
        };
        if (c.op == "M" || c.op == "MN")
            add(spectral::spectrum(p, adapted, OpKind::M), "M",
                [&](int k) { return r < 1.0 ? std::pow(p.rho(), -(k + c.q)) : nan; });
        if (c.op == "N" || c.op == "MN")
            add(spectral::spectrum(p, plain, OpKind::N), "N",
                [&](int k) { return c.q == 0 ? spectral::nu_k(p, k) : nan; });
        if (c.op == "P")
            add(spectral::spectrum_P(p, plain), "P",
                [&](int k) { return r == 0.0 && c.q == 0 ? std::ldexp(1.0, -2 * (k - 1)) : nan; });
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return std::abs(a.v) > std::abs(b.v); });
        for (const Row& w : rows)
            t.add({w.v.real(), w.v.imag(), std::string(w.op), w.k, w.closed, w.delta, r, (long long)c.q, (long long)c.N});

        if (c.q == 0) {
            // truncated traces are closest in the adapted basis (exact up to the omitted rho^-k)
            const Eigen::MatrixXd M = spectral::matrix_M(p, adapted).entries;
            const Eigen::MatrixXd Nm = spectral::matrix_N(p, plain).entries;
            const Eigen::MatrixXd P = spectral::matrix_P(p, adapted).entries;
            auto pair = [&](TraceKind k, double matrix) {
                const double v = spectral::trace_closed(p, k);
                return json{{"closed", std::isfinite(v) ? json(v) : json(report::format_real(v))}, {"matrix", matrix}};
            };
            traces.push_back({{"r", r},
                              {"M", pair(TraceKind::M, M.trace())},
                              {"N", pair(TraceKind::N, Nm.trace())},
                              {"N2", pair(TraceKind::N2, (Nm * Nm).trace())},
                              {"P", pair(TraceKind::P, P.trace())}});
        }
    }
    emit(c, t, {{"basis_M", "adapted scale (1+r)/(1-r)"}, {"basis_N", "plain Laguerre"}, {"traces", traces}});
}

void cmd_zeta(const Config& c) {
    const auto zs = parse_grid(c.z_grid, "--z");
    const auto ss = parse_grid(c.s_grid, "--s-grid");
    Table t{{"r", "z", "s", "quantity", "value"}, {}};
    const double nan = std::nan("");
    for (double r : r_values(c)) {
        const Params p(r);
        const BasisSpec b{0, c.N, 1.0};
        for (double z : zs) {
            const FredholmSeries d0 = zeta::fredholm_det(p, 0, z, ss, b);
            const FredholmSeries d1 = zeta::fredholm_det(p, 1, z, ss, b);
            for (std::size_t i = 0; i < ss.size(); ++i) {
                const double s = ss[i];
                t.add({r, z, s, std::string("det0"), d0.det_values[i]});
                t.add({r, z, s, std::string("det1"), d1.det_values[i]});
                t.add({r, z, s, std::string("zeta2"),
                       std::abs(d0.det_values[i]) < 1e-12 ? nan : d1.det_values[i] / d0.det_values[i]});
                t.add({r, z, s, std::string("tail0"), d0.tail_estimates[i]});
                t.add({r, z, s, std::string("tail1"), d1.tail_estimates[i]});
            }
            t.add({r, z, nan, std::string("traces_decaying"), double(d0.traces_decaying && d1.traces_decaying)});
            if (std::abs(z) <= 1.0)
                for (int n = 1; n <= 2; ++n) {
                    const XiValue x = zeta::grand_partition_Xi(p, n, z, 60);
                    const double tf = d0.traces[n - 1] - d1.traces[n - 1];
                    t.add({r, z, double(n), std::string("Xi_n"), x.value});
                    t.add({r, z, double(n), std::string("trace_formula_residual"), std::abs(x.value - tf)});
                }
        }
        // log zeta_2(1,z) Taylor coefficients against the periodic orbits of F
        const auto c2 = zeta::log_zeta2_z_coeffs(p, b, 8);
        const auto cf = zeta::log_zetaF_coeffs(p, 8);
        for (int m = 1; m <= 8; ++m) {
            t.add({r, nan, double(m), std::string("logzeta2_z_coeff"), c2[m - 1]});
            t.add({r, nan, double(m), std::string("logzetaF_coeff"), cf[m - 1]});
        }
    }
    emit(c, t);
}

int cmd_reproduce(const Config& c) {
    acceptance::Options opt;
    opt.seed = c.seed;
    const auto results = acceptance::run(opt, std::cerr);
    Table t{{"id", "claim", "title", "pass", "detail", "seconds"}, {}};
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        t.add({(long long)r.id, r.claim, r.title, std::string(r.pass ? "pass" : "fail"), r.detail, r.seconds});
    }
    Config cc = c;
    cc.r = {};
    emit(cc, t);
    return all ? 0 : 3;
}

void add_common(CLI::App* sub, Config& c) {
    sub->add_option("--r", c.r, "parameter value(s) in [0,1]")->delimiter(',');
    sub->add_option("--r-grid", c.r_grid, "lo:hi:step");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_flag("--no-timestamp", c.no_timestamp, "omit the generation time");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ftlab: Farey-tent family numerics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", report::version);
    Config c;

    auto* map = app.add_subcommand("map", "partition points, orbits, return times");
    add_common(map, c);
    map->add_option("--n", c.n, "number of points / orbit length")->check(CLI::Range(0, 100000));
    map->add_option("--iters", c.iters, "Monte Carlo samples for tau");

    auto* measure = app.add_subcommand("measure", "densities, Kac, Lyapunov exponents");
    add_common(measure, c);
    measure->add_option("--mode", c.mode, "Birkhoff mode: F (under nu) or G (under mu)");
    measure->add_option("--iters", c.iters, "Birkhoff iterations");

    auto* th = app.add_subcommand("thermo", "free energy tables and bounds");
    add_common(th, c);
    th->add_option("--n", c.n, "iterate")->check(CLI::Range(1, 20));
    th->add_option("--beta-grid", c.beta_grid, "lo:hi:step or list, within [-4,2]");

    auto* sp = app.add_subcommand("spectrum", "eigenvalues of M, N, P with stability deltas and traces");
    add_common(sp, c);
    sp->add_option("--q", c.q, "space index")->check(CLI::Range(0, 10));
    sp->add_option("--N", c.N, "truncation")->check(CLI::Range(1, 400));
    sp->add_option("--op", c.op, "M, N, P or MN (merged)");

    auto* ze = app.add_subcommand("zeta", "Fredholm determinants, zeta_2, trace formula");
    add_common(ze, c);
    ze->add_option("--N", c.N, "truncation")->check(CLI::Range(1, 400));
    ze->add_option("--z", c.z_grid, "z value(s)");
    ze->add_option("--s-grid", c.s_grid, "lo:hi:step or list");

    auto* rep = app.add_subcommand("reproduce", "run every acceptance criterion");
    add_common(rep, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        if (c.command == "map") cmd_map(c);
        else if (c.command == "measure") cmd_measure(c);
        else if (c.command == "thermo") cmd_thermo(c);
        else if (c.command == "spectrum") cmd_spectrum(c);
        else if (c.command == "zeta") cmd_zeta(c);
        else if (c.command == "reproduce") return cmd_reproduce(c);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const UnsupportedMode& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
