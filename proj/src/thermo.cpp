#include "ftlab/thermo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ftlab/errors.hpp"
#include "ftlab/measures.hpp"
#include "ftlab/specfun.hpp"

namespace ftlab::thermo {

namespace {

void require_finite_measure(const Params& p, const char* who) {
    if (p.farey()) throw DomainError(std::string(who) + ": r = 1 has no invariant probability p_r");
}

struct BranchIntegrator {
    const Params& p;
    double beta;
    int n;
    std::vector<double> y, w;
    DensityClosedForm e;
    MoebiusMap br[2];
    double sum = 0.0, comp = 0.0;

    BranchIntegrator(const Params& p_, double beta_, int n_, int order)
        : p(p_), beta(beta_), n(n_), e(measures::density(p_, DensityKind::e)) {
        const auto rule = specfun::quad_legendre(0.0, 1.0, order);
        y = rule.nodes;
        w = rule.weights;
        br[0] = maps::inverse_branch(p, 0);
        br[1] = maps::inverse_branch(p, 1);
    }

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    void leaf(const MoebiusMap& m) {
        double s = 0.0;
        const double ex = 1.0 - beta;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double d = std::abs(m.derivative(y[i]));
            s += w[i] * std::pow(d, ex) * e(m(y[i]));
        }
        add(s);
    }

    void rec(const MoebiusMap& cur, int depth) {
        if (depth == n) {
            leaf(cur);
            return;
        }
        rec(compose(cur, br[0]), depth + 1);
        rec(compose(cur, br[1]), depth + 1);
    }
};

}  // namespace

double partition_Z(const Params& p, double beta, int n, int quadrature_order) {
    require_finite_measure(p, "partition_Z");
    if (n < 1 || n > 20) throw DomainError("partition_Z: need 1 <= n <= 20");
    // p_r is a probability measure
    if (beta == 0.0) return 1.0;
    BranchIntegrator bi(p, beta, n, quadrature_order);
    bi.rec(MoebiusMap{}, 0);
    return (bi.sum + bi.comp) / measures::nu_total(p);
}

std::pair<double, double> partition_Z_monte_carlo(const Params& p, double beta, int n, long long samples,
                                                  std::uint64_t seed) {
    require_finite_measure(p, "partition_Z_monte_carlo");
    Rng rng(seed, Rng::partition_mc);
    const double d = p.delta(), r = p.r();
    const double L = -std::log1p(-r);
    double s = 0.0, s2 = 0.0;
    for (long long i = 0; i < samples; ++i) {
        const double u = rng.uniform();
        // inverse CDF of e_r / nu_r([0,1])
        double x = p.tent() ? u : d / r * std::expm1(u * L);
        double logd = 0.0;
        for (int k = 0; k < n; ++k) {
            logd += std::log(std::abs(maps::map_derivative(p, x)));
            x = maps::map_eval(p, x);
        }
        const double v = std::exp(beta * logd);
        s += v;
        s2 += v * v;
    }
    const double mean = s / samples;
    const double var = (s2 / samples - mean * mean) * samples / (samples - 1.0);
    return {mean, std::sqrt(var / samples)};
}

FreeEnergyEstimate free_energy(const Params& p, double beta, int n, int quadrature_order) {
    FreeEnergyEstimate fe;
    fe.beta = beta;
    fe.n = n;
    fe.f_n = std::log(partition_Z(p, beta, n, quadrature_order)) / n;
    fe.branch_count = 1LL << n;
    fe.quadrature_order = quadrature_order;
    fe.delta_prev = n > 1 ? fe.f_n - std::log(partition_Z(p, beta, n - 1, quadrature_order)) / (n - 1)
                          : std::numeric_limits<double>::quiet_NaN();
    return fe;
}

double lambda_r(const Params& p) {
    if (p.farey()) return 0.0;
    return measures::lyapunov_closed(p) / measures::nu_total(p);
}

double gamma_r(const Params& p) {
    if (p.tent() || p.farey()) return 0.0;
    constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    constexpr double ln2 = std::numbers::ln2;
    const double r = p.r();
    const double L = -std::log1p(-0.5 * r);
    const double g = (pi2_6 - 2.0 * specfun::dilog(1.0 / p.rho()) + L * std::log(4.0 - 2.0 * r) - ln2 * ln2) /
                     std::log1p(-r);
    if (g < 0.0 && g > -1e-12) return 0.0;
    return g;
}

RatePoint rate_function_point(const Params& p, double beta, int n, double h) {
    auto f = [&](double b) { return std::log(partition_Z(p, b, n)) / n; };
    const double d1 = (f(beta + h) - f(beta - h)) / (2.0 * h);
    const double d2 = (f(beta + 0.5 * h) - f(beta - 0.5 * h)) / h;
    const double lam = lambda_r(p);
    RatePoint rp;
    rp.alpha = d1 - lam;
    rp.phi = beta * rp.alpha - (f(beta) - beta * lam);
    rp.richardson_gap = std::abs(d1 - d2);
    return rp;
}

RadiusBounds ess_radius_bounds(const Params& p, int k) {
    if (k < 0) throw DomainError("ess_radius_bounds: k must be >= 0");
    const double lr = std::log(p.rho());
    return {std::exp(-k * (lr + gamma_r(p))), std::exp(-k * lr)};
}

}  // namespace ftlab::thermo
