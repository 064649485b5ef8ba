#pragma once

#include <vector>

#include "ftlab/basis.hpp"
#include "ftlab/maps.hpp"

namespace ftlab {

struct FredholmSeries {
    double r = 0.0;
    int q = 0;
    double z = 0.0;
    int N = 0;
    int n_max = 0;
    std::vector<double> traces;      // tr Q^n, n = 1..n_max
    std::vector<double> det_coeffs;  // det(1 - sQ) = sum_n det_coeffs[n] s^n, n = 0..n_max
    std::vector<double> s_grid;
    std::vector<double> det_values;
    std::vector<double> tail_estimates;  // |det_coeffs[n_max]| |s|^n_max per grid point
    bool traces_decaying = true;

    double det(double s) const;
};

struct XiValue {
    double value;
    double tail_bound;
    int cutoff;
    bool flagged;  // tail bound above the requested tolerance
};

namespace zeta {

constexpr int default_n_max = 24;

// (-1)^q N (1/z - M)^{-1} on H_q; b.q is replaced by q.
OperatorMatrix q_matrix(const Params& p, int q, double z, const BasisSpec& b);

// sum over G-words of length n of z^{a_1+...+a_n}/|(G^n)'| at the fixed point
XiValue grand_partition_Xi(const Params& p, int n, double z, int digit_cutoff, double tol = 1e-8);

// tr Q^n via repeated products, compensated diagonal sums
std::vector<double> traces_of_powers(const Eigen::MatrixXd& m, int n_max);
// coefficients of det(1 - sA) from traces of powers of A (Newton's identities)
std::vector<double> det_coeffs_from_traces(const std::vector<double>& traces);

FredholmSeries fredholm_det(const Params& p, int q, double z, const std::vector<double>& s_grid,
                            const BasisSpec& b, int n_max = default_n_max);

// det(1 - sQ_{z,1})/det(1 - sQ_{z,0})
double zeta_two_variable(const Params& p, double s, double z, const BasisSpec& b, int n_max = default_n_max);

// Taylor coefficients c_n, n = 1..n_max, of log zeta_2(s, z) in s: (tr Q^n_{z,0} - tr Q^n_{z,1})/n
std::vector<double> log_zeta2_s_coeffs(const Params& p, double z, const BasisSpec& b, int n_max);
// Taylor coefficients c_m, m = 1..m_max, of log zeta_2(1, z) in z, from Q_z = sum_j z^j (-1)^q N M^{j-1}
std::vector<double> log_zeta2_z_coeffs(const Params& p, const BasisSpec& b, int m_max);
// Z_m(F_r)/m from the fixed points of F_r^m
std::vector<double> log_zetaF_coeffs(const Params& p, int m_max);
// Z_n(G_r)/n from the fixed points of G_r^n, with the truncation bound of each
std::vector<XiValue> log_zetaG_coeffs(const Params& p, int n_max, int digit_cutoff);

}  // namespace zeta
}  // namespace ftlab
