#pragma once

#include <Eigen/Dense>
#include <functional>

#include "ftlab/maps.hpp"
#include "ftlab/specfun.hpp"

namespace ftlab {

// Orthogonal basis of L^2(m_q), dm_q = t^alpha e^{-t} dt with alpha = 2q+1:
//   b_k(t) = L_k^alpha(c t) e^{-(c-1)t/2},  k = 0..N-1.
// c = 1 is the plain Laguerre basis. Matrices are always stored with respect
// to the orthonormalized functions b_k/|b_k|.
struct BasisSpec {
    int q = 0;
    int N = 50;
    double scale = 1.0;

    double alpha() const { return 2.0 * q + 1.0; }
    double gamma() const { return 0.5 * (scale - 1.0); }
    double log_norm_sq(int k) const;
    double norm(int k) const;
    // b_k(t), not normalized
    double eval(int k, double t) const;
    void validate() const;

    // c = (1+r)/delta, in which M_{r,q} is upper triangular; the plain basis at r = 1
    static BasisSpec adapted(const Params& p, int q, int N);
};

// phi = sum_k coeffs[k] b_k
struct CoeffVector {
    BasisSpec basis;
    Eigen::VectorXd coeffs;

    Eigen::VectorXd orthonormal() const;
    static CoeffVector from_orthonormal(const BasisSpec& b, const Eigen::VectorXd& v);
    double norm() const;
    double operator()(double t) const;
};

enum class OpKind { M, N, MN, Q };

struct OperatorMatrix {
    BasisSpec basis;
    Params params;
    Eigen::MatrixXd entries;
    OpKind which;
    double z = 0.0;  // Q only
};

const char* op_name(OpKind k);

namespace spectral {

constexpr int default_order_extra = 16;

// Least-squares projection of g(t) e^{-a t} onto the basis. The Gauss rule
// absorbs e^{-a t}, so polynomial g is projected exactly.
CoeffVector project(const BasisSpec& b, const std::function<double(double)>& g, double a = 0.0, int order = 0);
// t^j e^{-a t}
CoeffVector project_monomial_exp(const BasisSpec& b, int j, double a);

}  // namespace spectral
}  // namespace ftlab
