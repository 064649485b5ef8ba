#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ftlab/errors.hpp"
#include "ftlab/measures.hpp"
#include "ftlab/specfun.hpp"

using namespace ftlab;
using namespace ftlab::measures;

namespace {
constexpr double ln2 = std::numbers::ln2;
constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6;
}  // namespace

TEST_CASE("normalizer K") {
    CHECK(normalizer_K(Params(0)) == 2.0);
    CHECK(normalizer_K(Params(1)) == 1.0 / ln2);
    CHECK(std::abs(normalizer_K(Params(0.5)) - 0.5 / std::log(4.0 / 3.0)) <= 1e-15);
    CHECK(std::abs(normalizer_K(Params(0.5)) - 1.7380297) <= 1e-7);
    // continuity at both ends
    CHECK(std::abs(normalizer_K(Params(1e-9)) - 2.0) <= 1e-8);
    CHECK(std::abs(normalizer_K(Params(1 - 1e-12)) - 1 / ln2) <= 1e-10);
}

TEST_CASE("densities are normalized on A_1 and positive") {
    for (int i = 0; i <= 10; ++i) {
        const Params p(i / 10.0);
        const auto e = density(p, DensityKind::e), h = density(p, DensityKind::h);
        CHECK(std::abs(specfun::integrate_composite(e, 0.5, 1.0) - 1.0) <= 1e-12);
        CHECK(std::abs(nu_interval(p, 0.5, 1.0) - 1.0) <= 1e-12);
        CHECK(std::abs(specfun::integrate_composite(h, 0.0, 1.0) - 1.0) <= 1e-12);
        CHECK(std::abs(mu_interval(p, 0.0, 1.0) - 1.0) <= 1e-12);
        for (double x : {0.001, 0.5, 1.0}) CHECK(e(x) > 0.0);
        for (double x : {0.0, 0.5, 1.0}) CHECK(h(x) > 0.0);
    }
}

TEST_CASE("nu_total") {
    CHECK(std::abs(nu_total(Params(0.5)) - (normalizer_K(Params(0.5)) / 0.5) * ln2) <= 1e-14);
    CHECK(std::abs(nu_total(Params(0.5)) - 2.409421) <= 1e-6);
    CHECK(nu_total(Params(0)) == 2.0);
    CHECK(std::isinf(nu_total(Params(1))));
    const Params p(1e-8);
    CHECK(std::abs(nu_total(p) - specfun::integrate_composite(density(p, DensityKind::e), 0.0, 1.0)) <= 1e-6);
    for (double r : {0.2, 0.7, 0.95})
        CHECK(std::abs(nu_total(Params(r)) - specfun::integrate_composite(density(Params(r), DensityKind::e), 0.0, 1.0)) <=
              1e-12);
}

TEST_CASE("transfer operator") {
    for (int i = 0; i <= 10; ++i) {
        const Params p(i / 10.0);
        const auto e = density(p, DensityKind::e);
        double worst = 0.0;
        for (int j = 0; j < 1000; ++j) {
            const double x = (j + 0.5) / 1000;
            worst = std::max(worst, std::abs(pf_apply(p, e, x) - e(x)));
        }
        CHECK(worst <= 1e-12);
    }
    CHECK(pf_apply(Params(0), [](double) { return 1.0; }, 0.37) == 1.0);
    CHECK(std::abs(pf_apply(Params(0.5), [](double x) { return x; }, 0.0) - 2.0 / 3.0) <= 1e-15);
}

TEST_CASE("density relations") {
    for (double r : {0.0, 0.3, 0.7, 1.0}) {
        const Params p(r);
        const auto e = density(p, DensityKind::e), h = density(p, DensityKind::h);
        const MoebiusMap phi1 = maps::inverse_branch(p, 1), phi0 = maps::inverse_branch(p, 0);
        for (double x : {0.0, 0.2, 0.9, 1.0}) CHECK(std::abs(h(x) - std::abs(phi1.derivative(x)) * e(phi1(x))) <= 1e-13);
        if (r == 1.0) continue;
        // e_r = sum_k (Phi_0^k)' h_r o Phi_0^k, tail ratio 1/rho
        for (double x : {0.1, 0.6}) {
            double s = 0.0;
            for (int k = 0; k <= 60; ++k) {
                const MoebiusMap m = k == 0 ? MoebiusMap{} : maps::inverse_branch_iterate(p, k);
                s += m.derivative(x) * h(m(x));
            }
            CHECK(std::abs(s - e(x)) <= 10 * std::pow(p.rho(), -61) * e(x) / (1 - 1 / p.rho()) + 1e-13);
        }
    }
}

TEST_CASE("nu(A_n) = sum_{l >= n} mu(A_l)") {
    const Params p(0.5);
    for (int n = 1; n <= 10; ++n) {
        const double nu = nu_interval(p, maps::partition_point_c(p, n), maps::partition_point_c(p, n - 1));
        double s = 0.0;
        for (int l = n; l < 200; ++l) s += mu_interval(p, maps::partition_point_c(p, l), maps::partition_point_c(p, l - 1));
        CHECK(std::abs(nu - s) <= 1e-10);
        // and by quadrature of the density
        const double q = specfun::integrate_composite(density(p, DensityKind::e), maps::partition_point_c(p, n),
                                                      maps::partition_point_c(p, n - 1));
        CHECK(std::abs(nu - q) <= 1e-12);
    }
}

TEST_CASE("Kac expected return") {
    CHECK(std::abs(kac_expected_return(Params(0.5)) - ln2 / std::log(4.0 / 3.0)) <= 1e-14);
    CHECK(std::abs(kac_expected_return(Params(1e-9)) - 2.0) <= 1e-8);
    const Params p(1 - std::ldexp(1.0, -10));
    CHECK(std::abs(kac_expected_return(p) - 10.0) / 10.0 <= 0.15);
    CHECK(std::isinf(kac_expected_return(Params(1))));
    const OrbitStats s = kac_monte_carlo(Params(0.01), 200000, 5);
    CHECK(std::abs(s.mean - kac_expected_return(Params(0.01))) <= 3 * s.std_error());
    CHECK_THROWS_AS(kac_monte_carlo(Params(1), 10, 1), UnsupportedMode);
}

TEST_CASE("sampling from mu_r") {
    // r = 0 is uniform
    const auto u = sample_mu(Params(0), 1000, 3);
    CHECK(*std::min_element(u.begin(), u.end()) > 0.0);
    CHECK(*std::max_element(u.begin(), u.end()) < 1.0);
    for (double r : {0.0, 0.5, 1.0}) {
        const Params p(r);
        auto xs = sample_mu(p, 100000, 11);
        std::sort(xs.begin(), xs.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double F = mu_interval(p, 0.0, xs[i]);
            ks = std::max({ks, std::abs(F - double(i) / xs.size()), std::abs(F - double(i + 1) / xs.size())});
        }
        CHECK(ks < 0.01);
        if (r == 1.0) CHECK(std::abs(mu_interval(p, 0.0, 0.5) - std::log(1.5) / ln2) <= 1e-14);
    }
    // determinism
    CHECK(sample_mu(Params(0.3), 10, 42) == sample_mu(Params(0.3), 10, 42));
    CHECK(sample_mu(Params(0.3), 10, 42) != sample_mu(Params(0.3), 10, 43));
}

TEST_CASE("Lyapunov exponent closed form") {
    CHECK(std::abs(lyapunov_closed(Params(0)) - 2 * ln2) <= 1e-15);
    CHECK(std::abs(lyapunov_closed(Params(1)) - pi2_6 / ln2) <= 1e-15);
    CHECK(std::abs(lyapunov_closed(Params(1)) - 2.37314) <= 1e-5);
    // interior formula tends to the endpoint values
    CHECK(std::abs(lyapunov_closed(Params(1e-7)) - 2 * ln2) <= 1e-5);
    CHECK(std::abs(lyapunov_closed(Params(1 - 1e-9)) - pi2_6 / ln2) <= 1e-5);
    // chi_nu = int log|F'| d nu by quadrature
    for (double r : {0.2, 0.5, 0.8}) {
        const Params p(r);
        const auto e = density(p, DensityKind::e);
        const double q = specfun::integrate_composite([&](double x) { return std::log(std::abs(maps::map_derivative(p, x))) * e(x); }, 0.0,
                                                      0.5) +
                         specfun::integrate_composite([&](double x) { return std::log(std::abs(maps::map_derivative(p, x))) * e(x); }, 0.5,
                                                      1.0);
        CHECK(std::abs(q - lyapunov_closed(p)) <= 1e-10);
    }
}

TEST_CASE("Birkhoff averages") {
    const OrbitStats t = lyapunov_birkhoff(Params(0), BirkhoffMode::F_under_nu, 10000, 100, 1);
    CHECK(std::abs(t.mean - ln2) <= 1e-14);
    for (double r : {0.5, 1.0}) {
        const Params p(r);
        const OrbitStats s = lyapunov_birkhoff(p, BirkhoffMode::G_under_mu, 1000000, 1000, 9);
        CHECK(s.n_samples == 1000000);
        CHECK(std::abs(s.mean - lyapunov_closed(p)) <= 3.5 * s.std_error());
    }
    // F-mode average equals lambda_r = chi/nu([0,1])
    const Params p(0.5);
    const OrbitStats f = lyapunov_birkhoff(p, BirkhoffMode::F_under_nu, 1000000, 1000, 4);
    CHECK(std::abs(f.mean - lyapunov_closed(p) / nu_total(p)) <= 3.5 * f.std_error());
    CHECK_THROWS_AS(lyapunov_birkhoff(Params(1), BirkhoffMode::F_under_nu, 100, 10, 1), UnsupportedMode);
    // reproducible
    const auto a = lyapunov_birkhoff(p, BirkhoffMode::G_under_mu, 10000, 10, 77);
    const auto b = lyapunov_birkhoff(p, BirkhoffMode::G_under_mu, 10000, 10, 77);
    CHECK(a.mean == b.mean);
    CHECK(a.variance_estimate == b.variance_estimate);
}
