#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ftlab/basis.hpp"
#include "ftlab/errors.hpp"
#include "ftlab/specfun.hpp"

namespace ftlab {

struct EigenPair {
    double value;
    CoeffVector vector;  // unit norm in L^2(m_q), first nonzero coefficient positive
    double norm_sq;      // squared norm of the unnormalized closed-form eigenfunction
};

struct SpectralEntry {
    std::complex<double> value;
    double stability_delta;  // distance to the nearest eigenvalue at truncation N-10
};

enum class TraceKind { M, N, N2, P };

struct KernelCheck {
    double residual;       // |(M+N)c|/|c|
    double parity_defect;  // |Nc - (-1)^k Mc|/|c|
};

namespace spectral {

OperatorMatrix matrix_M(const Params& p, const BasisSpec& b);
OperatorMatrix matrix_N(const Params& p, const BasisSpec& b);
OperatorMatrix matrix_P(const Params& p, const BasisSpec& b);

// Independent assembly paths kept as oracles.
OperatorMatrix matrix_M_quadrature(const Params& p, const BasisSpec& b, int order = 0);
OperatorMatrix matrix_N_kernel(const Params& p, const BasisSpec& b, int order = 0);

// f(x) = x^{-2(1+q)} int_0^inf e^{-t/x} phi(t) t^{2q+1} dt = int_0^inf u^alpha e^{-u} phi(x u) du
double borel_transform(const CoeffVector& phi, double x);

// Callable version. The rule may carry any exponent a <= 2q+1; the remaining
// u^{2q+1-a} goes into the integrand (a = 0 keeps 1/t-type pre-images smooth).
template <class F>
double borel_transform_fn(F&& phi, int q, double x, const specfun::QuadratureRule& rule) {
    if (!(x > 0.0)) throw DomainError("borel_transform: x must be > 0");
    const double extra = 2.0 * q + 1.0 - rule.alpha;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double u = rule.nodes[i];
        s += rule.weights[i] * std::pow(u, extra) * phi(x * u);
    }
    return s;
}

// Pre-images of the invariant densities, e_r = B[phi_r] and h_r = B[psi_r].
double phi_r(const Params& p, double t);
double psi_r(const Params& p, double t);
// phi_1 is not in L^2(m): NotInL2Error at r = 1
CoeffVector phi_r_coeffs(const Params& p, const BasisSpec& b);
CoeffVector psi_r_coeffs(const Params& p, const BasisSpec& b);

EigenPair eigen_M_closed(const Params& p, int k, const BasisSpec& b);
EigenPair eigen_N_closed(const Params& p, int k, const BasisSpec& b);
double nu_k(const Params& p, int k);
// the same eigenvalue written through beta_r
double nu_k_beta_form(const Params& p, int k);
double alpha_r(const Params& p);
double beta_r(const Params& p);
// normalizations as printed, for comparison only
double A_k_printed(const Params& p, int k);
double B_k_printed(const Params& p, int k);
// Borel images of the eigenfunctions (up to normalization)
double chi_k(const Params& p, int k, double x);
double xi_k(const Params& p, int k, double x);

double trace_closed(const Params& p, TraceKind which);
// sum over the two fixed points of |Phi_i'|/(1 - Phi_i')
double trace_fixed_points(const Params& p);

KernelCheck kernel_check(const Params& p, int k, const BasisSpec& b);

// eigenvalues sorted by decreasing modulus
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m);
std::vector<SpectralEntry> spectrum(const Params& p, const BasisSpec& b, OpKind which);
std::vector<SpectralEntry> spectrum_P(const Params& p, const BasisSpec& b);
// real eigenvector of `m` for the eigenvalue closest to `target`, unit norm, phase fixed
Eigen::VectorXd eigenvector_near(const Eigen::MatrixXd& m, double target);

}  // namespace spectral
}  // namespace ftlab
