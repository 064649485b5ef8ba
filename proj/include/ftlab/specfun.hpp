#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ftlab::specfun {

// Bessel function of the first kind, integer order p >= 0, x >= 0.
double bessel_j(int p, double x);

// Generalized Laguerre polynomial L_k^(alpha)(x) by the three-term recurrence.
double laguerre(int k, double alpha, double x);
long double laguerre_ld(int k, long double alpha, long double x);
// L_0..L_{n-1} at x
void laguerre_all_ld(int n, long double alpha, long double x, long double* out);

// Real dilogarithm Li_2(q), q <= 1.
double dilog(double q);

enum class QuadKind { gen_laguerre, legendre };

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    // log of the weights; exact even where `weights` underflows (very high order)
    std::vector<double> log_weights;
    QuadKind kind = QuadKind::legendre;
    double alpha = 0.0;  // gen_laguerre only
    double a = 0.0, b = 0.0;  // legendre only

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// Nodes/weights for the weight t^alpha e^{-t} on (0, inf).
QuadratureRule quad_gen_laguerre(double alpha, int n);
// Nodes/weights for the unit weight on [a, b].
QuadratureRule quad_legendre(double a, double b, int n);

// int_0^inf t^alpha e^{-E t} f(t) dt using a gen-Laguerre(alpha) rule.
template <class F>
double integrate_scaled(const QuadratureRule& rule, double E, F&& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i] / E);
    return s / std::pow(E, rule.alpha + 1.0);
}

// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
template <class F>
double integrate_composite(F&& f, double a, double b, int panels = 8, int order = 64);

template <class F>
double integrate_composite(F&& f, double a, double b, int panels, int order) {
    const QuadratureRule ref = quad_legendre(0.0, 1.0, order);
    const double h = (b - a) / panels;
    double s = 0.0, comp = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double y = ref.weights[i] * h * f(lo + h * ref.nodes[i]) - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
    }
    return s;
}

}  // namespace ftlab::specfun
