#include "ftlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ftlab/errors.hpp"
#include "ftlab/maps.hpp"
#include "ftlab/measures.hpp"
#include "ftlab/spectral.hpp"
#include "ftlab/thermo.hpp"
#include "ftlab/zeta.hpp"

namespace ftlab::acceptance {

namespace {

using spectral::eigenvalues;

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

std::string fix(double x, int prec = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", prec, x);
    return buf;
}

struct Outcome {
    bool pass;
    std::string detail;
};

// max over k = 1..K of |ev_k - target(k)|, ev sorted by decreasing modulus
double top_error(const std::vector<std::complex<double>>& ev, int K, const std::function<double(int)>& target) {
    double e = 0.0;
    for (int k = 1; k <= K; ++k) e = std::max(e, std::abs(ev[k - 1] - target(k)));
    return e;
}

Outcome c1() {
    double worst = 0.0, worst_plain = 0.0;
    for (double r : {0.2, 0.5, 0.8}) {
        const Params p(r);
        auto target = [&](int k) { return std::pow(p.rho(), -k); };
        worst = std::max(worst, top_error(eigenvalues(spectral::matrix_M(p, BasisSpec::adapted(p, 0, 50)).entries), 8,
                                          target));
        worst_plain =
            std::max(worst_plain, top_error(eigenvalues(spectral::matrix_M(p, BasisSpec{0, 50, 1.0}).entries), 8, target));
    }
    return {worst <= 1e-8, "max |mu_k - rho^-k|, k<=8: " + sci(worst) + " (scaled basis c=(1+r)/delta; plain c=1 basis: " +
                               sci(worst_plain) + ")"};
}

Outcome c2() {
    double worst = 0.0, farey = 0.0;
    bool signs = true;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (double r : {0.0, 0.5, 1.0}) {
        const Params p(r);
        const auto ev = eigenvalues(spectral::matrix_N(p, BasisSpec{0, 50, 1.0}).entries);
        worst = std::max(worst, top_error(ev, 6, [&](int k) { return spectral::nu_k(p, k); }));
        for (int k = 1; k <= 6; ++k) signs = signs && ((ev[k - 1].real() > 0) == (k % 2 == 1));
        if (r == 1.0)
            farey = top_error(ev, 6, [&](int k) { return (k % 2 ? 1.0 : -1.0) * std::pow(g, 2 * k); });
    }
    return {worst <= 1e-8 && farey <= 1e-8 && signs,
            "max |nu_k - closed|, k<=6: " + sci(worst) + "; r=1 vs ((sqrt5-1)/2)^2k: " + sci(farey) +
                "; sign alternation " + (signs ? "ok" : "BROKEN")};
}

Outcome c3() {
    double eM = 0.0, eN = 0.0, eN2 = 0.0, eP = 0.0, eFP = 0.0;
    double rM = -1.0;
    for (int i = 0; i <= 9; ++i) {
        const Params p(i / 10.0);
        const BasisSpec ba = BasisSpec::adapted(p, 0, 50), b1{0, 50, 1.0};
        const double trM = spectral::matrix_M(p, ba).entries.trace();
        const Eigen::MatrixXd Nm = spectral::matrix_N(p, b1).entries;
        const double trN = Nm.trace(), trN2 = (Nm * Nm).trace();
        const double trP = spectral::matrix_P(p, ba).entries.trace();
        const double dM = std::abs(trM - spectral::trace_closed(p, TraceKind::M));
        if (dM > eM) eM = dM, rM = p.r();
        eN = std::max(eN, std::abs(trN - spectral::trace_closed(p, TraceKind::N)));
        eN2 = std::max(eN2, std::abs(trN2 - spectral::trace_closed(p, TraceKind::N2)));
        eP = std::max(eP, std::abs(trP - spectral::trace_closed(p, TraceKind::P)));
        eFP = std::max(eFP, std::abs(spectral::trace_fixed_points(p) - spectral::trace_closed(p, TraceKind::P)) /
                                spectral::trace_closed(p, TraceKind::P));
    }
    const Params p0(0.0);
    const double tp0 = spectral::matrix_P(p0, BasisSpec{0, 50, 1.0}).entries.trace();
    const double e0 = std::max(std::abs(tp0 - 4.0 / 3.0), std::abs(spectral::trace_closed(p0, TraceKind::P) - 4.0 / 3.0));
    const bool pass = eM <= 1e-7 && eN <= 1e-7 && eN2 <= 1e-7 && eP <= 1e-7 && e0 <= 1e-10 && eFP <= 1e-12;
    std::string d = "r in {0,..,0.9}: |trM-1/delta| " + sci(eM) + " (worst r=" + fix(rM, 1) + ", truncation floor rho^-50/delta), |trN| " +
                    sci(eN) + ", |trN^2| " + sci(eN2) + ", |trP| " + sci(eP) + "; trP(r=0)-4/3 " + sci(e0) +
                    "; fixed-point route rel " + sci(eFP);
    return {pass, d};
}

Outcome c4() {
    const Params p(0.0);
    const BasisSpec b{0, 50, 1.0};
    const Eigen::MatrixXd P = spectral::matrix_P(p, b).entries;
    const auto ev = eigenvalues(P);
    const double eev = top_error(ev, 4, [](int k) { return std::pow(4.0, -(k - 1)); });
    auto cosine = [&](double target, const std::function<double(double)>& f) {
        const Eigen::VectorXd v = spectral::eigenvector_near(P, target);
        Eigen::VectorXd c = spectral::project(b, f).orthonormal();
        return std::abs(v.dot(c)) / c.norm();
    };
    const double c0 = cosine(1.0, [](double) { return 1.0; });
    const double c2 = cosine(0.25, [](double t) { return t * t / 2 - 3 * t + 2; });
    const double c4p = cosine(1.0 / 16, [](double t) { return t * t * t * t / 24 - 5 * t * t * t / 6 + 10 * t * t / 3 - 32.0 / 15; });
    const double c4c = cosine(1.0 / 16, [](double t) { return t * t * t * t / 24 - 5 * t * t * t / 6 + 10 * t * t / 3 - 8.0 / 3; });
    const double tol = 1e-9;
    const bool pass = eev <= 1e-8 && 1 - c0 <= tol && 1 - c2 <= tol && 1 - c4p <= tol;
    return {pass, "eigenvalues 4^-n, n<=3: " + sci(eev) + "; 1-cos: phi0 " + sci(1 - c0) + ", phi2 " + sci(1 - c2) +
                      ", phi4 as printed (const -32/15) " + sci(1 - c4p) + ", phi4 with const -8/3 " + sci(1 - c4c)};
}

Outcome c5() {
    double pf = 0.0, be = 0.0, bh = 0.0;
    const auto rule = specfun::quad_gen_laguerre(0.0, 128);
    for (int i = 0; i <= 10; ++i) {
        const Params p(i / 10.0);
        const auto e = measures::density(p, DensityKind::e), h = measures::density(p, DensityKind::h);
        for (int j = 0; j < 1000; ++j) {
            const double x = (j + 0.5) / 1000.0;
            pf = std::max(pf, std::abs(measures::pf_apply(p, e, x) - e(x)));
        }
        for (int j = 0; j <= 95; ++j) {
            const double x = 0.05 + j * 0.01;
            be = std::max(be, std::abs(spectral::borel_transform_fn([&](double t) { return spectral::phi_r(p, t); }, 0, x, rule) - e(x)));
            bh = std::max(bh, std::abs(spectral::borel_transform_fn([&](double t) { return spectral::psi_r(p, t); }, 0, x, rule) - h(x)));
        }
    }
    return {pf <= 1e-12 && be <= 1e-9 && bh <= 1e-9,
            "sup |Pe_r-e_r| on 10^3 grid, 11 r values: " + sci(pf) + "; |B[phi_r]-e_r| " + sci(be) + ", |B[psi_r]-h_r| " + sci(bh)};
}

Outcome c6(std::uint64_t seed) {
    std::string d;
    bool pass = true;
    for (double r : {0.3, 0.6, 0.9}) {
        const Params p(r);
        const OrbitStats s = measures::kac_monte_carlo(p, 1000000, seed);
        const double ex = measures::kac_expected_return(p);
        const double z = (s.mean - ex) / s.std_error();
        pass = pass && std::abs(z) <= 3.0;
        d += "r=" + fix(r, 1) + ": " + fix(s.mean, 5) + " vs " + fix(ex, 5) + " (" + fix(z, 2) + " sigma); ";
    }
    const Params p(1.0 - std::ldexp(1.0, -10));
    const double ex = measures::kac_expected_return(p), asym = std::log(1.0 / p.delta()) / std::numbers::ln2;
    const double rel = std::abs(ex - asym) / asym;
    pass = pass && rel <= 0.15;
    d += "delta=2^-10: <l>=" + fix(ex, 4) + " vs log(1/delta)/log2=" + fix(asym, 4) + " (rel " + sci(rel) + ")";
    return {pass, d};
}

Outcome c7(std::uint64_t seed) {
    const double e0 = std::abs(measures::lyapunov_closed(Params(0.0)) - 2.0 * std::numbers::ln2);
    const double e1 =
        std::abs(measures::lyapunov_closed(Params(1.0)) - std::numbers::pi * std::numbers::pi / (6.0 * std::numbers::ln2));
    // how the interior formula approaches its endpoint values
    const double n0 = std::abs(measures::lyapunov_closed(Params(1e-6)) - 2.0 * std::numbers::ln2);
    const double n1 = std::abs(measures::lyapunov_closed(Params(1.0 - 1e-6)) -
                               std::numbers::pi * std::numbers::pi / (6.0 * std::numbers::ln2));
    bool pass = e0 <= 1e-10 && e1 <= 1e-10;
    std::string d = "endpoints " + sci(e0) + ", " + sci(e1) + " (interior formula at 1e-6 from ends: " + sci(n0) + ", " + sci(n1) + "); ";
    for (double r : {0.5, 1.0}) {
        const Params p(r);
        const OrbitStats s = measures::lyapunov_birkhoff(p, BirkhoffMode::G_under_mu, 10000000, 1000, seed);
        const double z = (s.mean - measures::lyapunov_closed(p)) / s.std_error();
        pass = pass && std::abs(z) <= 3.0;
        d += "G-mode r=" + fix(r, 1) + ": " + fix(s.mean, 6) + " vs " + fix(measures::lyapunov_closed(p), 6) + " (" + fix(z, 2) +
             " sigma); ";
    }
    return {pass, d};
}

Outcome c8() {
    double worst = 0.0;
    for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const Params p(r);
        for (int j = 0; j < 1000; ++j) worst = std::max(worst, maps::renorm_residual(p, (j + 0.5) / 1000.0));
    }
    return {worst <= 1e-14, "max residual " + sci(worst)};
}

Outcome c9() {
    double worst16 = 0.0;
    bool monotone = true;
    for (double r : {0.2, 0.5, 0.8}) {
        const Params p(r);
        const double lr = std::log(p.rho()), g = thermo::gamma_r(p);
        for (double beta : {-3.0, -1.0, -0.5}) {
            double prev = 1e300;
            for (int n : {8, 12, 16}) {
                const double f = thermo::free_energy(p, beta, n).f_n;
                const double slack = std::max({0.0, f - beta * lr, beta * (lr + g) - f});
                monotone = monotone && slack <= prev;
                prev = slack;
                if (n == 16) worst16 = std::max(worst16, slack);
            }
        }
    }
    bool zero = true;
    for (int i = 0; i < 10; ++i) zero = zero && thermo::free_energy(Params(i / 10.0), 0.0, 12).f_n == 0.0;
    double tent = 0.0;
    for (double beta : {-3.0, -1.0, -0.5, 1.0})
        for (int n : {8, 12, 16})
            tent = std::max(tent, std::abs(thermo::free_energy(Params(0.0), beta, n).f_n - beta * std::numbers::ln2));
    return {worst16 <= 5e-2 && monotone && zero && tent <= 1e-14,
            "envelope violation at n=16: " + sci(worst16) + ", nonincreasing in n: " + (monotone ? "yes" : "no") +
                "; f_n(0)==0: " + (zero ? "yes" : "no") + "; r=0 |f_n - beta log2| " + sci(tent)};
}

Outcome c10() {
    const Params p(0.5);
    const BasisSpec b{0, 50, 1.0};
    // G: log zeta_2(s,1) coefficients vs Z_n(G)/n
    const auto cs = zeta::log_zeta2_s_coeffs(p, 1.0, b, 3);
    const auto cg = zeta::log_zetaG_coeffs(p, 3, 64);
    double eG = 0.0, tG = 0.0;
    for (int n = 0; n < 3; ++n) {
        eG = std::max(eG, std::abs(cs[n] - cg[n].value));
        tG = std::max(tG, cg[n].tail_bound);
    }
    // F: log zeta_2(1,z) coefficients vs log((1-z) zeta_F(z)) = sum (Z_m - 1) z^m/m
    const auto cz = zeta::log_zeta2_z_coeffs(p, b, 8);
    const auto cf = zeta::log_zetaF_coeffs(p, 8);
    double eF = 0.0, eFc = 0.0;
    for (int m = 1; m <= 8; ++m) {
        eF = std::max(eF, std::abs(cz[m - 1] - (cf[m - 1] - 1.0 / m)));
        eFc = std::max(eFc, std::abs(cz[m - 1] - (cf[m - 1] - std::pow(p.rho(), -m) / m)));
    }
    // tent map: zeta_2(1,z) == 1 claimed
    const Params p0(0.0);
    double eT = 0.0, eTc = 0.0;
    for (int j = -5; j <= 5; ++j) {
        const double z = 0.1 * j;
        const double v = zeta::zeta_two_variable(p0, 1.0, z, b);
        eT = std::max(eT, std::abs(v - 1.0));
        eTc = std::max(eTc, std::abs(v - (2.0 - z) / (2.0 * (1.0 - z))));
    }
    const bool pass = eG <= 1e-5 && eF <= 1e-5 && eT <= 1e-10;
    return {pass, "G-identity n<=3: " + sci(eG) + " (tail " + sci(tG) + "); F-identity with factor (1-z), m<=8: " + sci(eF) +
                      " [with factor (1-z/rho): " + sci(eFc) + "]; tent zeta_2(1,z)-1, |z|<=0.5: " + sci(eT) +
                      " [vs (2-z)/(2(1-z)): " + sci(eTc) + "]"};
}

Outcome c11() {
    const BasisSpec b{0, 50, 1.0};
    double worst = 0.0, tail = 0.0;
    for (double r : {0.0, 0.5}) {
        const Params p(r);
        for (double z : {0.5, 0.9}) {
            const auto t0 = zeta::traces_of_powers(zeta::q_matrix(p, 0, z, b).entries, 2);
            const auto t1 = zeta::traces_of_powers(zeta::q_matrix(p, 1, z, b).entries, 2);
            for (int n : {1, 2}) {
                const XiValue xi = zeta::grand_partition_Xi(p, n, z, 64);
                worst = std::max(worst, std::abs(xi.value - (t0[n - 1] - t1[n - 1])));
                tail = std::max(tail, xi.tail_bound);
            }
        }
    }
    return {worst <= 1e-5, "max |Xi_n - (trQ^n_0 - trQ^n_1)|: " + sci(worst) + ", digit cutoff 64, tail bound " + sci(tail)};
}

Outcome c12() {
    const BasisSpec b{0, 50, 1.0};
    double worst = 0.0;
    for (double r : {0.0, 0.5}) {
        const Params p(r);
        const Eigen::MatrixXd M = spectral::matrix_M(p, b).entries, P = spectral::matrix_P(p, b).entries;
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(b.N, b.N);
        for (double z : {0.3, 0.7}) {
            const Eigen::MatrixXd Q = zeta::q_matrix(p, 0, z, b).entries;
            worst = std::max(worst, ((I - Q) * (I - z * M) - (I - z * P)).cwiseAbs().maxCoeff());
        }
    }
    return {worst <= 1e-9, "max entry of (I-Q_z)(I-zM)-(I-zP): " + sci(worst)};
}

Outcome c13() {
    bool pass = true;
    std::string d;
    for (int e : {4, 5, 6}) {
        const Params p(1.0 - std::ldexp(1.0, -e));
        const auto ev = eigenvalues(spectral::matrix_M(p, BasisSpec::adapted(p, 0, 200)).entries);
        int count = 0;
        for (auto v : ev)
            if (std::abs(v.imag()) < 1e-12 && v.real() >= 0.1 && v.real() <= 0.9) ++count;
        const double pred = std::log(0.8 / 0.09) / p.delta();
        pass = pass && std::abs(count - pred) <= 2.0;
        d += "delta=2^-" + std::to_string(e) + ": " + std::to_string(count) + " vs " + fix(pred, 2) + "; ";
    }
    const Params p1(1.0);
    const Eigen::MatrixXd P = spectral::matrix_P(p1, BasisSpec{0, 50, 1.0}).entries;
    const double sym = (P - P.transpose()).cwiseAbs().maxCoeff();
    pass = pass && sym <= 1e-10;
    d += "r=1 symmetry defect of M+N: " + sci(sym);
    return {pass, d};
}

struct Spec {
    int id;
    const char* title;
    const char* claim;
    std::function<Outcome(const Options&)> fn;
};

const std::vector<Spec>& specs() {
    static const std::vector<Spec> s = {
        {1, "spectrum of M_r", "mu_k = rho^-k", [](const Options&) { return c1(); }},
        {2, "spectrum of N_r", "nu_k = (-1)^(k-1) (4rho/(1+sqrt(1+4rho))^2)^k", [](const Options&) { return c2(); }},
        {3, "traces", "tr M = 1/delta, tr N, tr N^2, tr P", [](const Options&) { return c3(); }},
        {4, "r=0 transfer spectrum", "sp(P_0) = {4^-n}, polynomial eigenfunctions", [](const Options&) { return c4(); }},
        {5, "invariant densities", "P e_r = e_r, B[phi_r] = e_r, B[psi_r] = h_r", [](const Options&) { return c5(); }},
        {6, "Kac formula", "<l> = log(1/delta)/log(2/rho)", [](const Options& o) { return c6(o.seed); }},
        {7, "Lyapunov exponents", "chi limits 2log2, pi^2/(6log2); chi_nu = chi_mu", [](const Options& o) { return c7(o.seed); }},
        {8, "renormalization fixed point", "R_r Phi_r0 = Phi_r0", [](const Options&) { return c8(); }},
        {9, "free-energy sandwich", "beta log rho >= f(beta) >= beta(log rho + gamma_r)", [](const Options&) { return c9(); }},
        {10, "zeta identities", "zeta_2(s,1) = zeta_G(s); zeta_2(1,z) = (1-z) zeta_F(z)", [](const Options&) { return c10(); }},
        {11, "trace formula", "Xi_n(z) = tr Q^n_z,0 - tr Q^n_z,1", [](const Options&) { return c11(); }},
        {12, "resolvent identity", "(1-Q_z)(1-zP_0) = 1-zP", [](const Options&) { return c12(); }},
        {13, "intermittency evidence", "#sp(M_r) in [a,b] ~ log((b-a)/(ab))/(1-r); M_1+N_1 self-adjoint",
         [](const Options&) { return c13(); }},
    };
    return s;
}

}  // namespace

std::string format_line(const Result& r) {
    std::ostringstream os;
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.title << " {" << r.claim << "} " << r.detail << " ("
       << fix(r.seconds, 1) << " s)";
    return os.str();
}

std::vector<Result> run(const Options& opt, std::ostream& log) {
    std::vector<Result> out;
    for (const auto& s : specs()) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), s.id) == opt.only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Result r{s.id, s.title, s.claim, false, "", 0.0};
        try {
            const Outcome o = s.fn(opt);
            r.pass = o.pass;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << format_line(r) << std::endl;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace ftlab::acceptance
