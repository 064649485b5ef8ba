#include <cmath>
#include <numbers>
#include <string>

#include "ftlab/errors.hpp"
#include "ftlab/specfun.hpp"

namespace ftlab::specfun {

namespace {

constexpr int max_newton = 100;
constexpr long double newton_tol = 1e-15L;

[[noreturn]] void node_failure(const char* what, int i) {
    throw NumericError(std::string(what) + ": Newton iteration did not converge for node " + std::to_string(i));
}

}  // namespace

QuadratureRule quad_gen_laguerre(double alpha, int n) {
    if (n < 1) throw DomainError("quad_gen_laguerre: n must be >= 1");
    if (alpha <= -1.0) throw DomainError("quad_gen_laguerre: alpha must be > -1");
    QuadratureRule rule;
    rule.kind = QuadKind::gen_laguerre;
    rule.alpha = alpha;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.log_weights.resize(n);

    const long double a = alpha;
    // log of Gamma(n+alpha)/Gamma(n)
    const long double lg = std::lgamma((long double)n + a) - std::lgamma((long double)n);
    long double z = 0.0L;
    std::vector<long double> zs(n);
    for (int i = 0; i < n; ++i) {
        // Stroud-Secrest style starting values
        if (i == 0) {
            z = (1.0L + a) * (3.0L + 0.92L * a) / (1.0L + 2.4L * n + 1.8L * a);
        } else if (i == 1) {
            z += (15.0L + 6.25L * a) / (1.0L + 0.9L * a + 2.5L * n);
        } else {
            const long double ai = i - 1;
            z += ((1.0L + 2.55L * ai) / (1.9L * ai) + 1.26L * ai * a / (1.0L + 3.5L * ai)) * (z - zs[i - 2]) /
                 (1.0L + 0.3L * a);
        }
        long double p1 = 0, p2 = 0, pp = 0;
        int it = 0;
        for (; it < max_newton; ++it) {
            p1 = 1.0L;
            p2 = 0.0L;
            for (int j = 1; j <= n; ++j) {
                const long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1.0L + a - z) * p2 - (j - 1.0L + a) * p3) / j;
            }
            pp = (n * p1 - (n + a) * p2) / z;
            const long double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= newton_tol * std::max(1.0L, std::abs(z))) break;
        }
        if (it == max_newton) node_failure("quad_gen_laguerre", i);
        // recompute at the converged node
        p1 = 1.0L;
        p2 = 0.0L;
        for (int j = 1; j <= n; ++j) {
            const long double p3 = p2;
            p2 = p1;
            p1 = ((2.0L * j - 1.0L + a - z) * p2 - (j - 1.0L + a) * p3) / j;
        }
        pp = (n * p1 - (n + a) * p2) / z;
        zs[i] = z;
        rule.nodes[i] = double(z);
        const long double lw = lg - std::log(-pp * n * p2);
        if (!std::isfinite(lw)) throw NumericError("quad_gen_laguerre: bad weight at node " + std::to_string(i));
        rule.log_weights[i] = double(lw);
        rule.weights[i] = double(std::exp(lw));
    }
    for (int i = 1; i < n; ++i)
        if (!(rule.nodes[i] > rule.nodes[i - 1]))
            throw NumericError("quad_gen_laguerre: nodes not increasing at " + std::to_string(i));
    return rule;
}

QuadratureRule quad_legendre(double a, double b, int n) {
    if (n < 1) throw DomainError("quad_legendre: n must be >= 1");
    if (!(a < b)) throw DomainError("quad_legendre: need a < b");
    QuadratureRule rule;
    rule.kind = QuadKind::legendre;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.log_weights.resize(n);
    const long double xm = 0.5L * ((long double)b + a), xl = 0.5L * ((long double)b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double pp = 0;
        int it = 0;
        for (; it < max_newton; ++it) {
            long double p1 = 1.0L, p2 = 0.0L;
            for (int j = 1; j <= n; ++j) {
                const long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1.0L) * z * p2 - (j - 1.0L) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0L);
            const long double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= newton_tol) break;
        }
        if (it == max_newton) node_failure("quad_legendre", i);
        long double p1 = 1.0L, p2 = 0.0L;
        for (int j = 1; j <= n; ++j) {
            const long double p3 = p2;
            p2 = p1;
            p1 = ((2.0L * j - 1.0L) * z * p2 - (j - 1.0L) * p3) / j;
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0L);
        const long double w = 2.0L * xl / ((1.0L - z * z) * pp * pp);
        // z runs from near +1 downward; store ascending
        rule.nodes[i] = double(xm - xl * z);
        rule.nodes[n - 1 - i] = double(xm + xl * z);
        rule.weights[i] = rule.weights[n - 1 - i] = double(w);
        rule.log_weights[i] = rule.log_weights[n - 1 - i] = double(std::log(w));
    }
    if (n % 2 == 1) rule.nodes[n / 2] = double(xm);
    return rule;
}

}  // namespace ftlab::specfun
