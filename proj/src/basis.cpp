#include "ftlab/basis.hpp"

#include <cmath>
#include <vector>

#include "basis_detail.hpp"
#include "ftlab/errors.hpp"

namespace ftlab {

double BasisSpec::log_norm_sq(int k) const {
    const double a = alpha();
    return std::lgamma(k + a + 1.0) - std::lgamma(k + 1.0) - (a + 1.0) * std::log(scale);
}

double BasisSpec::norm(int k) const { return std::exp(0.5 * log_norm_sq(k)); }

double BasisSpec::eval(int k, double t) const {
    return specfun::laguerre(k, alpha(), scale * t) * std::exp(-gamma() * t);
}

void BasisSpec::validate() const {
    if (q < 0) throw DomainError("BasisSpec: q must be >= 0");
    if (N < 1) throw DomainError("BasisSpec: N must be >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("BasisSpec: scale must be positive");
}

BasisSpec BasisSpec::adapted(const Params& p, int q, int N) {
    if (p.farey()) return {q, N, 1.0};
    return {q, N, (1.0 + p.r()) / p.delta()};
}

const char* op_name(OpKind k) {
    switch (k) {
        case OpKind::M: return "M";
        case OpKind::N: return "N";
        case OpKind::MN: return "M+N";
        case OpKind::Q: return "Q";
    }
    return "?";
}

Eigen::VectorXd CoeffVector::orthonormal() const {
    Eigen::VectorXd v(coeffs.size());
    for (int k = 0; k < coeffs.size(); ++k) v[k] = coeffs[k] * basis.norm(k);
    return v;
}

CoeffVector CoeffVector::from_orthonormal(const BasisSpec& b, const Eigen::VectorXd& v) {
    CoeffVector c{b, Eigen::VectorXd(v.size())};
    for (int k = 0; k < v.size(); ++k) c.coeffs[k] = v[k] / b.norm(k);
    return c;
}

double CoeffVector::norm() const { return orthonormal().norm(); }

double CoeffVector::operator()(double t) const {
    const int n = int(coeffs.size());
    std::vector<long double> L(n);
    specfun::laguerre_all_ld(n, basis.alpha(), (long double)basis.scale * t, L.data());
    long double s = 0.0L;
    for (int k = 0; k < n; ++k) s += coeffs[k] * L[k];
    return double(s * std::exp(-(long double)basis.gamma() * t));
}

namespace detail {

int default_order(const BasisSpec& b) { return 2 * b.N + spectral::default_order_extra; }

Eigen::VectorXd scaled_weights(const specfun::QuadratureRule& rule, double E, double power) {
    const int n = int(rule.size());
    Eigen::VectorXd w(n);
    const double shift = -(rule.alpha + 1.0) * std::log(E);
    for (int i = 0; i < n; ++i) w[i] = std::exp(power * (rule.log_weights[i] + shift));
    return w;
}

Eigen::MatrixXd weighted_basis_table(const BasisSpec& b, const specfun::QuadratureRule& rule, double E,
                                     double power) {
    const int n = int(rule.size()), N = b.N;
    Eigen::MatrixXd T(n, N);
    std::vector<long double> L(N), lognorm(N);
    for (int k = 0; k < N; ++k) lognorm[k] = -0.5L * b.log_norm_sq(k);
    const long double shift = -(long double)(rule.alpha + 1.0) * std::log((long double)E);
    for (int i = 0; i < n; ++i) {
        const long double t = (long double)rule.nodes[i] / E;
        specfun::laguerre_all_ld(N, b.alpha(), (long double)b.scale * t, L.data());
        const long double lw = (long double)power * ((long double)rule.log_weights[i] + shift);
        for (int k = 0; k < N; ++k) T(i, k) = double(std::exp(lw + lognorm[k]) * L[k]);
    }
    return T;
}

}  // namespace detail

namespace spectral {

CoeffVector project(const BasisSpec& b, const std::function<double(double)>& g, double a, int order) {
    b.validate();
    const double E = 1.0 + b.gamma() + a;
    if (!(E > 0.0)) throw DomainError("project: decay rate too negative for L^2(m_q)");
    const auto rule = specfun::quad_gen_laguerre(b.alpha(), order > 0 ? order : detail::default_order(b));
    const Eigen::MatrixXd T = detail::weighted_basis_table(b, rule, E, 1.0);
    Eigen::VectorXd gv(rule.size());
    for (int i = 0; i < int(rule.size()); ++i) gv[i] = g(rule.nodes[i] / E);
    return CoeffVector::from_orthonormal(b, T.transpose() * gv);
}

CoeffVector project_monomial_exp(const BasisSpec& b, int j, double a) {
    const int order = std::max(detail::default_order(b), b.N / 2 + j / 2 + 4);
    return project(b, [j](double t) { return std::pow(t, j); }, a, order);
}

}  // namespace spectral
}  // namespace ftlab
