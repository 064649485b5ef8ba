#include "ftlab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "basis_detail.hpp"
#include "ftlab/errors.hpp"
#include "ftlab/measures.hpp"

namespace ftlab::spectral {

namespace {

// h_m = Gamma(m+alpha+1)/m!, the squared norm of L_m^alpha
long double log_h(int m, long double alpha) { return std::lgamma(m + alpha + 1.0L) - std::lgamma(m + 1.0L); }

// Column k holds the orthonormal coefficients of L_k(lambda y) in the L_i(y):
//   L_k(lambda y) = sum_i C(k+alpha, k-i) lambda^i (1-lambda)^{k-i} L_i(y).
Eigen::MatrixXd dilation(int N, double alpha, double lambda) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, N);
    const long double a = alpha, lam = lambda, oml = 1.0L - lam;
    const long double llam = std::log(std::abs(lam)), loml = oml == 0.0L ? 0.0L : std::log(std::abs(oml));
    for (int k = 0; k < N; ++k) {
        for (int i = 0; i <= k; ++i) {
            if (oml == 0.0L && i < k) continue;
            if (lam == 0.0L && i > 0) continue;
            const int m = k - i;
            long double l = std::lgamma(k + a + 1.0L) - std::lgamma(m + 1.0L) - std::lgamma(i + a + 1.0L);
            l += 0.5L * (log_h(i, a) - log_h(k, a));
            if (i > 0) l += i * llam;
            if (m > 0) l += m * loml;
            long double v = std::exp(l);
            if ((lam < 0 && (i & 1)) != (oml < 0 && (m & 1))) v = -v;
            T(i, k) = double(v);
        }
    }
    return T;
}

OperatorMatrix wrap(const Params& p, const BasisSpec& b, Eigen::MatrixXd e, OpKind which) {
    return OperatorMatrix{b, p, std::move(e), which, 0.0};
}

int order_or_default(const BasisSpec& b, int order) { return order > 0 ? order : detail::default_order(b); }

}  // namespace

OperatorMatrix matrix_M(const Params& p, const BasisSpec& b) {
    b.validate();
    const double c = b.scale, g = b.gamma(), a = b.alpha(), rho = p.rho();
    const double E = 1.0 + g + (p.r() + g) / rho;
    const double s = E / c;
    const Eigen::MatrixXd Tmu = dilation(b.N, a, c / E);
    const Eigen::MatrixXd Tlam = dilation(b.N, a, 1.0 / rho);
    const double pre = std::exp(-(1.0 + b.q) * std::log(rho) - (a + 1.0) * std::log(s));
    Eigen::MatrixXd m = pre * (Tmu.transpose() * Tmu) * Tlam;
    return wrap(p, b, std::move(m), OpKind::M);
}

OperatorMatrix matrix_M_quadrature(const Params& p, const BasisSpec& b, int order) {
    b.validate();
    const double g = b.gamma(), rho = p.rho();
    const double E = 1.0 + g + (p.r() + g) / rho;
    const auto rule = specfun::quad_gen_laguerre(b.alpha(), order_or_default(b, order));
    const Eigen::MatrixXd A = detail::weighted_basis_table(b, rule, E, 0.5);
    // the image side is the basis evaluated at t/rho
    const auto rule_img = [&] {
        auto r2 = rule;
        for (auto& x : r2.nodes) x /= rho;
        return r2;
    }();
    Eigen::MatrixXd B = detail::weighted_basis_table(b, rule_img, E, 0.0);
    const Eigen::VectorXd w = detail::scaled_weights(rule, E, 0.5);
    B = w.asDiagonal() * B;
    const double pre = std::pow(rho, -(1.0 + b.q));
    return wrap(p, b, pre * A.transpose() * B, OpKind::M);
}

OperatorMatrix matrix_N(const Params& p, const BasisSpec& b) {
    b.validate();
    const int N = b.N;
    const long double c = b.scale, g = b.gamma(), a = b.alpha(), rho = p.rho(), delta = p.delta();
    const long double bb = 1.0L + g;
    const long double theta = (bb - c) / bb;
    const long double kappa = (1.0L - delta * bb) / (rho * bb);
    const double E = double(1.0L + g + kappa);
    if (!(E > 0.0)) throw DomainError("matrix_N: basis scale too large for this r");
    const auto rule = specfun::quad_gen_laguerre(b.alpha(), detail::default_order(b));
    const int n = int(rule.size());
    const Eigen::MatrixXd A = detail::weighted_basis_table(b, rule, E, 0.5);

    // images N b_k = rho^{-1-q} b^{-alpha-1} theta^k L_k(-Y/theta) e^{-kappa t}, Y = c t/(rho b^2)
    const long double lpre = -(1.0L + b.q) * std::log(rho) - (a + 1.0L) * std::log(bb);
    std::vector<long double> lognorm(N), lbin(N * N, 0.0L), lfact(N);
    for (int k = 0; k < N; ++k) lognorm[k] = -0.5L * (long double)b.log_norm_sq(k);
    for (int l = 0; l < N; ++l) lfact[l] = std::lgamma(l + 1.0L);
    const bool small_theta = std::abs(theta) < 1e-3L;
    const long double ltheta = theta == 0.0L ? 0.0L : std::log(std::abs(theta));
    if (small_theta)
        for (int k = 0; k < N; ++k)
            for (int l = 0; l <= k; ++l)
                lbin[k * N + l] = std::lgamma(k + a + 1.0L) - std::lgamma(k - l + 1.0L) - std::lgamma(l + a + 1.0L);
    const long double shift = -(a + 1.0L) * std::log((long double)E);
    Eigen::MatrixXd B(n, N);
    std::vector<long double> P(N), L(N);
    for (int i = 0; i < n; ++i) {
        const long double t = (long double)rule.nodes[i] / E;
        const long double Y = c * t / (rho * bb * bb);
        if (small_theta) {
            const long double lY = std::log(Y);
            for (int k = 0; k < N; ++k) {
                long double s = 0.0L;
                for (int l = 0; l <= k; ++l) {
                    const int m = k - l;
                    if (theta == 0.0L && m > 0) continue;
                    long double term = std::exp(lbin[k * N + l] + m * ltheta + l * lY - lfact[l]);
                    if (theta < 0 && (m & 1)) term = -term;
                    s += term;
                }
                P[k] = s;
            }
        } else {
            specfun::laguerre_all_ld(N, a, -Y / theta, L.data());
            long double tk = 1.0L;
            for (int k = 0; k < N; ++k) {
                P[k] = tk * L[k];
                tk *= theta;
            }
        }
        const long double lw = 0.5L * ((long double)rule.log_weights[i] + shift) + lpre;
        for (int k = 0; k < N; ++k) B(i, k) = double(std::exp(lw + lognorm[k]) * P[k]);
    }
    return wrap(p, b, A.transpose() * B, OpKind::N);
}

OperatorMatrix matrix_N_kernel(const Params& p, const BasisSpec& b, int order) {
    b.validate();
    if (b.q > 8) throw DomainError("matrix_N_kernel: Bessel order above 17 not supported");
    const double rho = p.rho(), g = b.gamma();
    const int p_bes = 2 * b.q + 1;
    const auto rule = specfun::quad_gen_laguerre(b.alpha(), order_or_default(b, order));
    const int n = int(rule.size());
    const double Et = g + 1.0 / rho, Es = 1.0 + g;
    if (!(Et > 0.0)) throw DomainError("matrix_N_kernel: basis scale too small");
    const Eigen::MatrixXd At = detail::weighted_basis_table(b, rule, Et, 1.0);
    const Eigen::MatrixXd As = detail::weighted_basis_table(b, rule, Es, 1.0);
    const double k0 = 1.0 / std::tgamma(p_bes + 1.0);
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
        const double t = rule.nodes[i] / Et;
        for (int l = 0; l < n; ++l) {
            const double s = rule.nodes[l] / Es;
            const double z = s * t / rho;
            if (z < 1e-14) {
                K(i, l) = k0;
                continue;
            }
            const double x = 2.0 * std::sqrt(z);
            K(i, l) = specfun::bessel_j(p_bes, x) / std::pow(0.5 * x, p_bes);
        }
    }
    const double pre = std::pow(rho, -(1.0 + b.q));
    return wrap(p, b, pre * At.transpose() * K * As, OpKind::N);
}

OperatorMatrix matrix_P(const Params& p, const BasisSpec& b) {
    Eigen::MatrixXd m = matrix_M(p, b).entries + matrix_N(p, b).entries;
    return wrap(p, b, std::move(m), OpKind::MN);
}

double borel_transform(const CoeffVector& phi, double x) {
    if (!(x > 0.0)) throw DomainError("borel_transform: x must be > 0");
    const BasisSpec& b = phi.basis;
    const int N = int(phi.coeffs.size());
    const auto rule = specfun::quad_gen_laguerre(b.alpha(), N / 2 + 4);
    const long double E = 1.0L + (long double)b.gamma() * x;
    if (!(E > 0.0L)) throw DomainError("borel_transform: x outside the convergence region of this basis");
    std::vector<long double> L(N);
    long double f = 0.0L;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        specfun::laguerre_all_ld(N, b.alpha(), (long double)b.scale * x * rule.nodes[i] / E, L.data());
        long double s = 0.0L;
        for (int k = 0; k < N; ++k) s += phi.coeffs[k] * L[k];
        f += (long double)rule.weights[i] * s;
    }
    return double(f * std::pow(E, -(long double)b.alpha() - 1.0L));
}

double phi_r(const Params& p, double t) {
    const double K = measures::normalizer_K(p);
    if (p.tent()) return K / p.delta();
    if (p.farey()) return 1.0 / (t * std::numbers::ln2);
    const double a = p.r() / p.delta();
    if (t == 0.0) return K / p.delta();
    return K / p.r() * -std::expm1(-a * t) / t;
}

double psi_r(const Params& p, double t) {
    const double K = measures::normalizer_K(p);
    if (p.tent()) return K / p.rho();
    const double a = p.r() / p.rho();
    if (t == 0.0) return K / p.rho();
    return K / p.r() * -std::expm1(-a * t) / t;
}

CoeffVector phi_r_coeffs(const Params& p, const BasisSpec& b) {
    if (p.farey()) throw NotInL2Error("phi_1(t) = 1/(t log 2) is not in L^2(m)");
    return project(b, [&p](double t) { return phi_r(p, t); });
}

CoeffVector psi_r_coeffs(const Params& p, const BasisSpec& b) {
    return project(b, [&p](double t) { return psi_r(p, t); });
}

namespace {

// squared L^2(m_q) norm of g(t) e^{-a t}, g a polynomial of degree deg
template <class G>
double poly_exp_norm_sq(const BasisSpec& b, G&& g, double a, int deg) {
    const double E = 1.0 + 2.0 * a;
    const auto rule = specfun::quad_gen_laguerre(b.alpha(), deg + 2);
    long double s = 0.0L;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const long double v = g(rule.nodes[i] / E);
        s += (long double)rule.weights[i] * v * v;
    }
    return double(s * std::pow((long double)E, -(long double)b.alpha() - 1.0L));
}

CoeffVector fix_phase(CoeffVector v) {
    const double mx = v.coeffs.cwiseAbs().maxCoeff();
    for (int k = 0; k < v.coeffs.size(); ++k)
        if (std::abs(v.coeffs[k]) > 1e-10 * mx) {
            if (v.coeffs[k] < 0) v.coeffs = -v.coeffs;
            break;
        }
    return v;
}

}  // namespace

EigenPair eigen_M_closed(const Params& p, int k, const BasisSpec& b) {
    if (p.farey()) throw DomainError("eigen_M_closed: M_1 has continuous spectrum");
    if (k < 1) throw DomainError("eigen_M_closed: k must be >= 1");
    const double a = p.r() / p.delta();
    CoeffVector v = project_monomial_exp(b, k - 1, a);
    const double n2 = poly_exp_norm_sq(b, [k](long double t) { return std::pow(t, (long double)(k - 1)); }, a, 2 * k);
    v.coeffs /= std::sqrt(n2);
    return {std::pow(p.rho(), -(k + b.q)), fix_phase(std::move(v)), n2};
}

EigenPair eigen_N_closed(const Params& p, int k, const BasisSpec& b) {
    if (b.q != 0) throw DomainError("eigen_N_closed: closed form is for q = 0");
    if (k < 1) throw DomainError("eigen_N_closed: k must be >= 1");
    const double al = alpha_r(p), be = beta_r(p);
    auto g = [k, al](long double t) { return specfun::laguerre_ld(k - 1, 1.0L, al * t); };
    CoeffVector v = project(b, [&](double t) { return double(g(t)); }, be,
                            std::max(detail::default_order(b), b.N / 2 + k + 4));
    const double n2 = poly_exp_norm_sq(b, g, be, 2 * k);
    v.coeffs /= std::sqrt(n2);
    return {nu_k(p, k), fix_phase(std::move(v)), n2};
}

double nu_k(const Params& p, int k) {
    const double s = std::sqrt(1.0 + 4.0 * p.rho());
    const double base = 4.0 * p.rho() / ((1.0 + s) * (1.0 + s));
    return ((k - 1) % 2 ? -1.0 : 1.0) * std::pow(base, k);
}

double nu_k_beta_form(const Params& p, int k) {
    const double be = beta_r(p);
    return ((k - 1) % 2 ? -1.0 : 1.0) * std::pow(p.rho(), -k) * std::pow(1.0 + be, -2 * k);
}

double alpha_r(const Params& p) { return std::sqrt(1.0 + 4.0 * p.rho()) / p.rho(); }
double beta_r(const Params& p) { return (1.0 + std::sqrt(1.0 + 4.0 * p.rho())) / (2.0 * p.rho()) - 1.0; }

double A_k_printed(const Params& p, int k) {
    if (p.farey()) throw DomainError("A_k: undefined at r = 1");
    return std::exp(k * std::log((1.0 + p.r()) / p.delta()) - 0.5 * std::lgamma(2.0 * k));
}

double B_k_printed(const Params& p, int k) {
    const double s = std::sqrt(1.0 + 4.0 * p.rho()), d = p.delta();
    const double u = d * d / (1.0 + 4.0 * p.rho());
    double sum = 0.0, uj = 1.0;
    for (int j = 0; j < k; ++j) {
        sum += std::exp(std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0) + std::lgamma(double(k)) -
                        std::lgamma(j + 1.0) - std::lgamma(double(k - j))) *
               uj;
        uj *= u;
    }
    return s / (p.rho() * std::sqrt(double(k))) * std::pow(1.0 - d / s, k) / std::sqrt(sum);
}

double chi_k(const Params& p, int k, double x) {
    return std::pow(x, k - 1) / std::pow(p.delta() + p.r() * x, k + 1);
}

double xi_k(const Params& p, int k, double x) {
    const double al = alpha_r(p), be = beta_r(p);
    return std::pow(1.0 + (be - al) * x, k - 1) / std::pow(1.0 + be * x, k + 1);
}

double trace_closed(const Params& p, TraceKind which) {
    const double s = std::sqrt(1.0 + 4.0 * p.rho());
    const double trN = (s - 1.0) / (2.0 * s);
    switch (which) {
        case TraceKind::M: return p.farey() ? std::numeric_limits<double>::infinity() : 1.0 / p.delta();
        case TraceKind::N: return trN;
        case TraceKind::N2: return 0.5 * ((1.0 + 2.0 * p.rho()) / s - 1.0);
        case TraceKind::P: return p.farey() ? std::numeric_limits<double>::infinity() : 1.0 / p.delta() + trN;
    }
    return 0.0;
}

double trace_fixed_points(const Params& p) {
    const MoebiusMap phi0 = maps::inverse_branch(p, 0), phi1 = maps::inverse_branch(p, 1);
    const double x0 = maps::moebius_fixed_point(phi0, 0.0, 0.5);
    const double x1 = maps::moebius_fixed_point(phi1, 0.5, 1.0);
    double s = 0.0;
    for (const auto& [m, x] : {std::pair{phi0, x0}, std::pair{phi1, x1}}) {
        const double d = m.derivative(x);
        if (d == 1.0) return std::numeric_limits<double>::infinity();
        s += std::abs(d) / (1.0 - d);
    }
    return s;
}

KernelCheck kernel_check(const Params& p, int k, const BasisSpec& b) {
    if (b.q != 0) throw DomainError("kernel_check: q = 0 only");
    if (k < 0 || 2 * k >= b.N) throw DomainError("kernel_check: need 0 <= k < N/2");
    const Eigen::VectorXd v =
        project(b, [k](double t) { return specfun::laguerre(k, 1.0, 2.0 * t); }).orthonormal();
    const Eigen::MatrixXd M = matrix_M(p, b).entries, Nm = matrix_N(p, b).entries;
    const Eigen::VectorXd Mv = M * v, Nv = Nm * v;
    const double sign = (k % 2) ? -1.0 : 1.0;
    return {(Mv + Nv).norm() / v.norm(), (Nv - sign * Mv).norm() / v.norm()};
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalues: eigensolver did not converge");
    std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::stable_sort(ev.begin(), ev.end(), [](auto x, auto y) {
        if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return ev;
}

namespace {

Eigen::MatrixXd assemble(const Params& p, const BasisSpec& b, OpKind which) {
    switch (which) {
        case OpKind::M: return matrix_M(p, b).entries;
        case OpKind::N: return matrix_N(p, b).entries;
        case OpKind::MN: return matrix_P(p, b).entries;
        case OpKind::Q: break;
    }
    throw DomainError("spectrum: use zeta::q_matrix for Q_z");
}

}  // namespace

std::vector<SpectralEntry> spectrum(const Params& p, const BasisSpec& b, OpKind which) {
    const auto fine = eigenvalues(assemble(p, b, which));
    std::vector<std::complex<double>> coarse;
    if (b.N > 10) {
        BasisSpec bc = b;
        bc.N = b.N - 10;
        coarse = eigenvalues(assemble(p, bc, which));
    }
    std::vector<SpectralEntry> out;
    out.reserve(fine.size());
    for (auto v : fine) {
        double d = std::numeric_limits<double>::quiet_NaN();
        for (auto w : coarse) d = std::isnan(d) ? std::abs(v - w) : std::min(d, std::abs(v - w));
        out.push_back({v, d});
    }
    return out;
}

std::vector<SpectralEntry> spectrum_P(const Params& p, const BasisSpec& b) { return spectrum(p, b, OpKind::MN); }

Eigen::VectorXd eigenvector_near(const Eigen::MatrixXd& m, double target) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
    if (es.info() != Eigen::Success) throw NumericError("eigenvector_near: eigensolver did not converge");
    int best = 0;
    for (int i = 1; i < m.rows(); ++i)
        if (std::abs(es.eigenvalues()[i] - target) < std::abs(es.eigenvalues()[best] - target)) best = i;
    Eigen::VectorXcd vc = es.eigenvectors().col(best);
    // rotate the complex phase so that the largest entry is real
    Eigen::Index imax;
    vc.cwiseAbs().maxCoeff(&imax);
    vc *= std::abs(vc[imax]) / vc[imax];
    Eigen::VectorXd v = vc.real();
    v.normalize();
    const double mx = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > 1e-10 * mx) {
            if (v[i] < 0) v = -v;
            break;
        }
    return v;
}

}  // namespace ftlab::spectral
