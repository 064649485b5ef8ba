#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ftlab/errors.hpp"
#include "ftlab/measures.hpp"
#include "ftlab/spectral.hpp"

using namespace ftlab;
using namespace ftlab::spectral;

namespace {

BasisSpec plain(int N, int q = 0) { return BasisSpec{q, N, 1.0}; }

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double residual(const Eigen::MatrixXd& A, const EigenPair& e) {
    const Eigen::VectorXd v = e.vector.orthonormal();
    return (A * v - e.value * v).norm() / v.norm();
}

}  // namespace

TEST_CASE("basis norms by quadrature") {
    for (int q : {0, 1})
        for (double c : {1.0, 3.0}) {
            const BasisSpec b{q, 12, c};
            const auto rule = specfun::quad_gen_laguerre(b.alpha(), 40);
            for (int k : {0, 3, 11}) {
                // b_k^2 t^alpha e^{-t} = L_k(ct)^2 t^alpha e^{-ct}
                const double n2 = specfun::integrate_scaled(rule, c, [&](double t) {
                    const double v = specfun::laguerre(k, b.alpha(), c * t);
                    return v * v;
                });
                CHECK(std::abs(n2 - b.norm(k) * b.norm(k)) <= 1e-11 * n2);
            }
        }
    CHECK(std::abs(plain(5, 1).norm(2) - std::sqrt(std::tgamma(6.0) / 2)) <= 1e-12);
}

TEST_CASE("matrix assembly agrees with quadrature") {
    for (double r : {0.0, 0.5, 1.0})
        for (int q : {0, 1}) {
            const Params p(r);
            const BasisSpec b = plain(20, q);
            CHECK(max_abs(matrix_M(p, b).entries - matrix_M_quadrature(p, b).entries) <= 1e-10);
            CHECK(max_abs(matrix_N(p, b).entries - matrix_N_kernel(p, b).entries) <= 1e-9);
            const BasisSpec a = BasisSpec::adapted(p, q, 20);
            CHECK(max_abs(matrix_M(p, a).entries - matrix_M_quadrature(p, a).entries) <= 1e-10);
        }
}

TEST_CASE("M_1 is multiplication by e^{-t}; M_1 + N_1 is symmetric") {
    const Params p(1);
    const BasisSpec b = plain(50);
    const Eigen::MatrixXd M = matrix_M(p, b).entries;
    CHECK(max_abs(M - M.transpose()) <= 1e-12);
    const Eigen::MatrixXd P = matrix_P(p, b).entries;
    CHECK(max_abs(P - P.transpose()) <= 1e-10);
    // <b_j, e^{-t} b_k> for j = k = 0: int t e^{-2t} dt / int t e^{-t} dt
    CHECK(std::abs(M(0, 0) - 0.25) <= 1e-14);
}

TEST_CASE("adapted basis makes M upper triangular") {
    const Params p(0.5);
    const BasisSpec a = BasisSpec::adapted(p, 0, 30);
    CHECK(a.scale == doctest::Approx(3.0));
    const Eigen::MatrixXd M = matrix_M(p, a).entries;
    CHECK(max_abs(M.triangularView<Eigen::StrictlyLower>().toDenseMatrix()) <= 1e-13);
    for (int k = 0; k < 30; ++k) CHECK(std::abs(M(k, k) - std::pow(1.5, -(k + 1))) <= 1e-14);
    CHECK(BasisSpec::adapted(Params(1), 0, 10).scale == 1.0);
}

TEST_CASE("spectra at N = 40") {
    const Params p(0.5);
    const auto em = eigenvalues(matrix_M(p, BasisSpec::adapted(p, 0, 40)).entries);
    for (int k = 1; k <= 10; ++k) CHECK(std::abs(em[k - 1].real() - std::pow(1.5, -k)) <= 1e-8);
    const auto e0 = eigenvalues(matrix_M(Params(0), plain(40)).entries);
    for (int k = 1; k <= 10; ++k) CHECK(std::abs(e0[k - 1].real() - std::ldexp(1.0, -k)) <= 1e-8);

    const auto en = eigenvalues(matrix_N(p, plain(40)).entries);
    CHECK(std::abs(en[0].real() - 6 / std::pow(1 + std::sqrt(7.0), 2)) <= 1e-8);
    CHECK(std::abs(en[0].real() - 0.451416) <= 1e-6);
    CHECK(std::abs(nu_k(p, 1) - 0.4514162) <= 1e-7);
    CHECK(std::abs(nu_k(p, 2) + 0.2037766) <= 1e-6);

    CHECK(std::abs(matrix_N(Params(0), plain(40)).entries.trace() - 1.0 / 3.0) <= 1e-8);
    const double s5 = std::sqrt(5.0);
    CHECK(std::abs(matrix_N(Params(1), plain(40)).entries.trace() - (s5 - 1) / (2 * s5)) <= 1e-8);
}

TEST_CASE("sign alternation of the N spectrum") {
    for (double r : {0.0, 0.5, 1.0}) {
        const auto ev = eigenvalues(matrix_N(Params(r), plain(50)).entries);
        for (int k = 1; k <= 8; ++k) {
            CHECK(std::abs(ev[k - 1].imag()) <= 1e-12);
            CHECK((ev[k - 1].real() > 0) == (k % 2 == 1));
            CHECK(std::abs(ev[k - 1].real() - nu_k(Params(r), k)) <= 1e-8);
        }
    }
}

TEST_CASE("closed-form eigenvalues") {
    for (int k = 1; k <= 6; ++k) {
        const double sgn = k % 2 ? 1.0 : -1.0;
        CHECK(std::abs(nu_k(Params(0), k) - sgn * std::ldexp(1.0, -k)) <= 1e-15);
        CHECK(std::abs(nu_k(Params(1), k) - sgn * std::pow((std::sqrt(5.0) - 1) / 2, 2 * k)) <= 1e-15);
    }
    for (int i = 0; i <= 20; ++i) {
        const Params p(i / 20.0);
        for (int k = 1; k <= 6; ++k) CHECK(std::abs(nu_k(p, k) - nu_k_beta_form(p, k)) <= 1e-14);
        // nu_1 = -Phi_1'(x_1)
        const double x1 = maps::fixed_point_x1(p);
        CHECK(std::abs(nu_k(p, 1) + maps::inverse_branch(p, 1).derivative(x1)) <= 1e-14);
    }
    CHECK(eigen_M_closed(Params(0.5), 1, BasisSpec::adapted(Params(0.5), 0, 20)).value == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(eigen_M_closed(Params(1), 1, plain(20)), DomainError);
}

TEST_CASE("closed-form eigenfunctions satisfy the matrix eigenproblem") {
    for (double r : {0.0, 0.3, 0.5, 0.8}) {
        const Params p(r);
        const BasisSpec a = BasisSpec::adapted(p, 0, 50);
        const Eigen::MatrixXd M = matrix_M(p, a).entries;
        for (int k = 1; k <= 8; ++k) CHECK(residual(M, eigen_M_closed(p, k, a)) <= 1e-8);
    }
    for (double r : {0.0, 0.5, 1.0}) {
        const Params p(r);
        const BasisSpec b = plain(50);
        const Eigen::MatrixXd N = matrix_N(p, b).entries;
        for (int k = 1; k <= 8; ++k) {
            const EigenPair e = eigen_N_closed(p, k, b);
            CHECK(e.value == nu_k(p, k));
            CHECK(residual(N, e) <= 1e-8);
            CHECK(std::abs(e.vector.norm() - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("printed normalizations against quadrature norms") {
    for (double r : {0.0, 0.3, 0.5, 0.9}) {
        const Params p(r);
        const BasisSpec a = BasisSpec::adapted(p, 0, 30);
        for (int k : {1, 2, 3, 5}) {
            const double A = 1 / std::sqrt(eigen_M_closed(p, k, a).norm_sq);
            CHECK(std::abs(A_k_printed(p, k) - A) <= 1e-12 * A);
        }
    }
    for (double r : {0.0, 0.5, 1.0}) {
        const Params p(r);
        for (int k : {1, 2, 3, 5}) {
            const double B = 1 / std::sqrt(eigen_N_closed(p, k, plain(30)).norm_sq);
            CHECK(std::abs(B_k_printed(p, k) - B) <= 1e-12 * B);
        }
    }
}

TEST_CASE("Borel transform examples") {
    for (double r : {0.2, 0.5, 0.8}) {
        const Params p(r);
        const double d = p.delta();
        const BasisSpec a = BasisSpec::adapted(p, 0, 30);
        for (int k = 1; k <= 5; ++k) {
            const CoeffVector v = project_monomial_exp(a, k - 1, r / d);
            for (double x : {0.05, 0.3, 0.7, 1.0}) {
                const double want = std::tgamma(k + 1.0) * std::pow(d, k + 1) * std::pow(x, k - 1) / std::pow(d + r * x, k + 1);
                CHECK(std::abs(borel_transform(v, x) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
            }
        }
    }
    const BasisSpec b = plain(20);
    for (int k = 0; k <= 6; ++k) {
        const CoeffVector v = project(b, [k](double t) { return specfun::laguerre(k, 1.0, 2 * t); });
        for (double x : {0.05, 0.25, 0.5, 0.9, 1.0})
            CHECK(std::abs(borel_transform(v, x) - (k + 1) * std::pow(1 - 2 * x, k)) <= 1e-10);
    }
    CHECK_THROWS_AS(borel_transform(project_monomial_exp(b, 0, 0.0), 0.0), DomainError);
}

TEST_CASE("density pre-images") {
    const auto rule = specfun::quad_gen_laguerre(0.0, 128);
    for (double r : {0.0, 0.4, 0.8, 1.0}) {
        const Params p(r);
        const auto e = measures::density(p, DensityKind::e), h = measures::density(p, DensityKind::h);
        for (double x : {0.05, 0.3, 0.6, 1.0}) {
            const double be = borel_transform_fn([&](double t) { return phi_r(p, t); }, 0, x, rule);
            const double bh = borel_transform_fn([&](double t) { return psi_r(p, t); }, 0, x, rule);
            CHECK(std::abs(be - e(x)) <= 1e-10 * e(x));
            CHECK(std::abs(bh - h(x)) <= 1e-10 * h(x));
        }
        if (r < 1) {
            const BasisSpec a = BasisSpec::adapted(p, 0, 40);
            CHECK(std::abs(borel_transform(phi_r_coeffs(p, a), 0.5) - e(0.5)) <= 1e-9);
        }
        CHECK(std::abs(borel_transform(psi_r_coeffs(p, plain(40)), 0.5) - h(0.5)) <= 1e-8);
    }
    CHECK_THROWS_AS(phi_r_coeffs(Params(1), plain(20)), NotInL2Error);
}

TEST_CASE("eigenfunction images under the branch operators") {
    for (double r : {0.0, 0.5, 0.9}) {
        const Params p(r);
        const MoebiusMap f0 = maps::inverse_branch(p, 0), f1 = maps::inverse_branch(p, 1);
        for (int k = 1; k <= 5; ++k)
            for (double x : {0.05, 0.2, 0.5, 0.8, 1.0}) {
                const double mu = std::pow(p.rho(), -k);
                const double c = chi_k(p, k, x);
                CHECK(std::abs(f0.derivative(x) * chi_k(p, k, f0(x)) - mu * c) <= 1e-9 * std::max(1.0, std::abs(c)));
                const double xi = xi_k(p, k, x);
                CHECK(std::abs(std::abs(f1.derivative(x)) * xi_k(p, k, f1(x)) - nu_k(p, k) * xi) <=
                      1e-9 * std::max(1.0, std::abs(xi)));
            }
    }
}

TEST_CASE("kernel of M + N") {
    for (double r : {0.5, 1.0})
        for (int k : {1, 3, 5}) {
            const KernelCheck kc = kernel_check(Params(r), k, plain(50));
            CHECK(kc.residual <= 1e-7);
        }
    for (int k : {2, 4}) CHECK(kernel_check(Params(0.5), k, plain(50)).parity_defect <= 1e-7);
    // B[L_1^1(2t)] = 2(1-2x) is odd about 1/2: P annihilates it
    for (double r : {0.0, 0.5, 1.0}) {
        double worst = 0;
        for (int j = 0; j <= 1000; ++j)
            worst = std::max(worst, std::abs(measures::pf_apply(Params(r), [](double x) { return 2 * (1 - 2 * x); }, j / 1000.0)));
        CHECK(worst <= 1e-13);
    }
    CHECK_THROWS(kernel_check(Params(0.5), 30, plain(50)));
}

TEST_CASE("traces") {
    CHECK(std::abs(trace_closed(Params(0), TraceKind::P) - 4.0 / 3.0) <= 1e-15);
    CHECK(std::abs(trace_closed(Params(0), TraceKind::N2) - 1.0 / 3.0) <= 1e-15);
    CHECK(std::abs(trace_closed(Params(0), TraceKind::N) - 1.0 / 3.0) <= 1e-15);
    CHECK(std::abs(trace_closed(Params(0.5), TraceKind::P) - 2.311018) <= 1e-6);
    CHECK(std::abs(trace_closed(Params(0.5), TraceKind::P) - trace_fixed_points(Params(0.5))) <= 1e-12);
    CHECK(std::isinf(trace_closed(Params(1), TraceKind::M)));
    CHECK(std::isinf(trace_closed(Params(1), TraceKind::P)));
    for (int i = 1; i <= 20; ++i) {
        const Params p(i / 20.0);
        CHECK(trace_closed(p, TraceKind::N2) < trace_closed(p, TraceKind::N));
    }
    for (double r : {0.0, 0.3, 0.5, 0.9}) {
        const Params p(r);
        const BasisSpec b = plain(50);
        const Eigen::MatrixXd N = matrix_N(p, b).entries;
        CHECK(std::abs(N.trace() - trace_closed(p, TraceKind::N)) <= 1e-8);
        CHECK(std::abs((N * N).trace() - trace_closed(p, TraceKind::N2)) <= 1e-8);
        // tr M is exact up to the omitted eigenvalues rho^{-k}, k > N
        const Eigen::MatrixXd M = matrix_M(p, BasisSpec::adapted(p, 0, 50)).entries;
        const double omitted = std::pow(p.rho(), -50) / (p.rho() - 1);
        CHECK(std::abs(M.trace() + omitted - trace_closed(p, TraceKind::M)) <= 1e-12 * trace_closed(p, TraceKind::M));
    }
}

TEST_CASE("transfer operator spectrum at r = 0") {
    const Params p(0);
    const BasisSpec b = plain(40);
    const auto sp = spectrum_P(p, b);
    // higher eigenvalues of this non-normal truncation lose accuracy as N grows
    for (int n = 0; n < 4; ++n) CHECK(std::abs(sp[n].value.real() - std::ldexp(1.0, -2 * n)) <= 1e-9);
    const Eigen::VectorXd v = eigenvector_near(matrix_P(p, b).entries, 0.25);
    const Eigen::VectorXd w = project(b, [](double t) { return t * t / 2 - 3 * t + 2; }).orthonormal().normalized();
    CHECK(std::abs(v.dot(w)) >= 1 - 1e-9);
    CHECK(v(0) > 0.0);
}

TEST_CASE("spectrum stability deltas") {
    const Params p(0.5);
    const auto s = spectrum(p, BasisSpec::adapted(p, 0, 40), OpKind::M);
    CHECK(s.size() == 40);
    for (int k = 0; k < 5; ++k) CHECK(s[k].stability_delta <= 1e-10);
    for (std::size_t k = 1; k < s.size(); ++k) CHECK(std::abs(s[k - 1].value) >= std::abs(s[k].value));
    CHECK(std::isnan(spectrum(p, plain(8), OpKind::N)[0].stability_delta));
    CHECK_THROWS_AS(spectrum(p, plain(20), OpKind::Q), DomainError);
}
