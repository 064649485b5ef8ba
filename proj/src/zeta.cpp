#include "ftlab/zeta.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "ftlab/errors.hpp"
#include "ftlab/spectral.hpp"

namespace ftlab {

double FredholmSeries::det(double s) const {
    double v = 0.0, sp = 1.0;
    for (double d : det_coeffs) {
        v += d * sp;
        sp *= s;
    }
    return v;
}

namespace zeta {

namespace {

double kahan_trace(const Eigen::MatrixXd& m) {
    double s = 0.0, c = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        const double y = m(i, i) - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

BasisSpec with_q(BasisSpec b, int q) {
    b.q = q;
    return b;
}

void check_z(const Params& p, int q, double z, const Eigen::MatrixXd& M) {
    if (!std::isfinite(z)) throw DomainError("q_matrix: z must be finite");
    if (p.farey() && z > 1.0) throw DomainError("q_matrix: z > 1 lies on the cut (1, inf) at r = 1");
    if (z == 0.0) return;
    const double iz = 1.0 / z;
    if (!p.farey())
        for (int k = 1; k <= M.rows() + 64; ++k)
            if (std::abs(iz - std::pow(p.rho(), -(k + q))) < 1e-8)
                throw PoleProximityError("q_matrix: z is within 1e-8 of the pole rho^(k+q), k = " + std::to_string(k), k);
    const auto ev = spectral::eigenvalues(M);
    for (std::size_t k = 0; k < ev.size(); ++k)
        if (std::abs(iz - ev[k]) < 1e-8)
            throw PoleProximityError(
                "q_matrix: 1/z is within 1e-8 of eigenvalue " + std::to_string(k + 1) + " of the truncated M", int(k + 1));
}

}  // namespace

OperatorMatrix q_matrix(const Params& p, int q, double z, const BasisSpec& b0) {
    if (q < 0) throw DomainError("q_matrix: q must be >= 0");
    const BasisSpec b = with_q(b0, q);
    const Eigen::MatrixXd M = spectral::matrix_M(p, b).entries;
    check_z(p, q, z, M);
    OperatorMatrix out{b, p, Eigen::MatrixXd::Zero(b.N, b.N), OpKind::Q, z};
    if (z == 0.0) return out;
    const Eigen::MatrixXd Nm = spectral::matrix_N(p, b).entries;
    // Q = (-1)^q z N (1 - zM)^{-1}, i.e. Q^T solves (1 - zM)^T Q^T = (-1)^q z N^T
    const Eigen::MatrixXd A = (Eigen::MatrixXd::Identity(b.N, b.N) - z * M).transpose();
    const Eigen::MatrixXd rhs = ((q % 2) ? -z : z) * Nm.transpose();
    out.entries = A.fullPivLu().solve(rhs).transpose();
    return out;
}

XiValue grand_partition_Xi(const Params& p, int n, double z, int digit_cutoff, double tol) {
    if (n < 1 || n > 4) throw DomainError("grand_partition_Xi: need 1 <= n <= 4");
    if (!(std::abs(z) <= 1.0)) throw DomainError("grand_partition_Xi: need |z| <= 1");
    const PeriodicPointsG pts = maps::periodic_points_G(p, n, digit_cutoff);
    double s = 0.0, c = 0.0;
    for (const auto& pt : pts.points) {
        int total = 0;
        for (int a : pt.word.symbols) total += a;
        const double y = std::pow(z, total) / std::abs(pt.multiplier) - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double S = 0.0;
    for (int a = 1; a <= digit_cutoff; ++a) S += std::pow(std::abs(z), a) * maps::induced_weight_bound(p, a);
    const double T = maps::induced_tail_bound(p, digit_cutoff, std::abs(z));
    const double tail = n * T * std::pow(S + T, n - 1);
    return {s, tail, digit_cutoff, tail > tol};
}

std::vector<double> traces_of_powers(const Eigen::MatrixXd& m, int n_max) {
    std::vector<double> tr;
    tr.reserve(n_max);
    Eigen::MatrixXd pw = m;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) pw = pw * m;
        tr.push_back(kahan_trace(pw));
    }
    return tr;
}

std::vector<double> det_coeffs_from_traces(const std::vector<double>& traces) {
    const int n_max = int(traces.size());
    std::vector<double> d(n_max + 1, 0.0);
    d[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += traces[k - 1] * d[n - k];
        d[n] = -s / n;
    }
    return d;
}

FredholmSeries fredholm_det(const Params& p, int q, double z, const std::vector<double>& s_grid, const BasisSpec& b,
                            int n_max) {
    if (n_max < 1) throw DomainError("fredholm_det: n_max must be >= 1");
    const OperatorMatrix Q = q_matrix(p, q, z, b);
    FredholmSeries fs;
    fs.r = p.r();
    fs.q = q;
    fs.z = z;
    fs.N = b.N;
    fs.n_max = n_max;
    fs.traces = traces_of_powers(Q.entries, n_max);
    fs.det_coeffs = det_coeffs_from_traces(fs.traces);
    fs.s_grid = s_grid;
    // |tr Q^n| ~ |lambda_1|^n: decay means |tr Q^n_max| well below |tr Q^(n_max/2)|
    const double t_hi = std::abs(fs.traces[n_max - 1]), t_mid = std::abs(fs.traces[n_max / 2]);
    fs.traces_decaying = n_max < 4 || t_hi <= t_mid || t_hi < 1e-12;
    for (double s : s_grid) {
        fs.det_values.push_back(fs.det(s));
        fs.tail_estimates.push_back(std::abs(fs.det_coeffs[n_max]) * std::pow(std::abs(s), n_max));
    }
    return fs;
}

double zeta_two_variable(const Params& p, double s, double z, const BasisSpec& b, int n_max) {
    const FredholmSeries d0 = fredholm_det(p, 0, z, {s}, b, n_max);
    const FredholmSeries d1 = fredholm_det(p, 1, z, {s}, b, n_max);
    const double den = d0.det_values[0];
    if (std::abs(den) < 1e-12)
        throw PoleProximityError("zeta_two_variable: det(1 - sQ_{z,0}) vanishes; (s, z) is at a pole", 0);
    return d1.det_values[0] / den;
}

std::vector<double> log_zeta2_s_coeffs(const Params& p, double z, const BasisSpec& b, int n_max) {
    const auto t0 = traces_of_powers(q_matrix(p, 0, z, b).entries, n_max);
    const auto t1 = traces_of_powers(q_matrix(p, 1, z, b).entries, n_max);
    std::vector<double> c(n_max);
    for (int n = 1; n <= n_max; ++n) c[n - 1] = (t0[n - 1] - t1[n - 1]) / n;
    return c;
}

std::vector<double> log_zeta2_z_coeffs(const Params& p, const BasisSpec& b0, int m_max) {
    std::vector<double> out(m_max, 0.0);
    for (int q = 0; q <= 1; ++q) {
        const BasisSpec b = with_q(b0, q);
        const Eigen::MatrixXd M = spectral::matrix_M(p, b).entries;
        const Eigen::MatrixXd Nm = spectral::matrix_N(p, b).entries;
        // C[j] = (-1)^q N M^{j-1}, the z^j coefficient of Q_z
        std::vector<Eigen::MatrixXd> C(m_max + 1);
        C[1] = (q ? -1.0 : 1.0) * Nm;
        for (int j = 2; j <= m_max; ++j) C[j] = C[j - 1] * M;
        // P[m] = z^m coefficient of Q_z^n, updated in place over n
        std::vector<Eigen::MatrixXd> P = C;
        std::vector<double> logdet(m_max + 1, 0.0);
        for (int n = 1; n <= m_max; ++n) {
            if (n > 1) {
                std::vector<Eigen::MatrixXd> next(m_max + 1);
                for (int m = n; m <= m_max; ++m) {
                    next[m] = Eigen::MatrixXd::Zero(b.N, b.N);
                    for (int j = 1; j <= m - (n - 1); ++j) next[m] += P[m - j] * C[j];
                }
                P = std::move(next);
            }
            for (int m = n; m <= m_max; ++m) logdet[m] -= kahan_trace(P[m]) / n;
        }
        // log zeta_2 = log det(1 - Q_1) - log det(1 - Q_0)
        for (int m = 1; m <= m_max; ++m) out[m - 1] += (q ? 1.0 : -1.0) * logdet[m];
    }
    return out;
}

std::vector<double> log_zetaF_coeffs(const Params& p, int m_max) {
    std::vector<double> c(m_max);
    for (int m = 1; m <= m_max; ++m) c[m - 1] = maps::orbit_sum_F(p, m) / m;
    return c;
}

std::vector<XiValue> log_zetaG_coeffs(const Params& p, int n_max, int digit_cutoff) {
    std::vector<XiValue> c;
    for (int n = 1; n <= n_max; ++n) {
        XiValue x = grand_partition_Xi(p, n, 1.0, digit_cutoff);
        x.value /= n;
        x.tail_bound /= n;
        c.push_back(x);
    }
    return c;
}

}  // namespace zeta
}  // namespace ftlab
