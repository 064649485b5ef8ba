#include "ftlab/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ftlab/errors.hpp"

namespace ftlab {

Params::Params(double r) : r_(r) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("r must lie in [0,1], got " + std::to_string(r));
}

MoebiusMap MoebiusMap::normalized() const {
    const double s = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (s == 0.0 || !std::isfinite(s)) throw StructuralError("degenerate Moebius map");
    return {a / s, b / s, c / s, d / s};
}

MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
    MoebiusMap m{m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d, m1.c * m2.a + m1.d * m2.c,
                 m1.c * m2.b + m1.d * m2.d};
    return m.normalized();
}

namespace maps {

namespace {

void check_unit(double x, const char* who) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(who) + ": x outside [0,1]");
}

// compensated accumulator
struct Neumaier {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double sum() const { return s + c; }
};

}  // namespace

double map_eval(const Params& p, double x) {
    check_unit(x, "map_eval");
    const double r = p.r();
    if (x <= 0.5) return p.rho() * x / (1.0 - r * x);
    return p.rho() * (1.0 - x) / (p.delta() + r * x);
}

double map_derivative(const Params& p, double x) {
    check_unit(x, "map_derivative");
    const double r = p.r();
    if (x <= 0.5) {
        const double den = 1.0 - r * x;
        return p.rho() / (den * den);
    }
    const double den = p.delta() + r * x;
    return -p.rho() / (den * den);
}

MoebiusMap inverse_branch(const Params& p, int i) {
    if (i == 0) return {1.0, 0.0, p.r(), p.rho()};
    if (i == 1) return {-p.delta(), p.rho(), p.r(), p.rho()};
    throw DomainError("inverse_branch: index must be 0 or 1");
}

MoebiusMap inverse_branch_iterate(const Params& p, int n) {
    if (n < 1) throw DomainError("inverse_branch_iterate: n must be >= 1");
    // x -> x/(rho^n + r S_n x),  S_n = sum_{k<n} rho^k
    const double rho = p.rho();
    const double rhon = std::pow(rho, n);
    const double S = p.r() == 1.0 ? double(n) : (rhon - 1.0) / (rho - 1.0);
    return MoebiusMap{1.0, 0.0, p.r() * S, rhon}.normalized();
}

double moebius_fixed_point(const MoebiusMap& m, double lo, double hi) {
    const double tol = 1e-12;
    auto inside = [&](double x) { return x >= lo - tol && x <= hi + tol; };
    auto clamp = [&](double x) { return std::min(hi, std::max(lo, x)); };
    const MoebiusMap n = m.normalized();
    const double A = n.c, B = n.d - n.a, C = -n.b;  // A x^2 + B x + C = 0
    if (std::abs(A) < 1e-300) {
        if (B == 0.0) throw StructuralError("moebius_fixed_point: identity-like map");
        const double x = -C / B;
        if (!inside(x)) throw StructuralError("moebius_fixed_point: no root in interval");
        return clamp(x);
    }
    const double disc = B * B - 4.0 * A * C;
    const double scale = B * B + std::abs(4.0 * A * C);
    if (std::abs(disc) <= 1e-12 * scale) {
        auto g = [&](double x) { return n(x) - x; };
        double a = lo, b = hi, ga = g(a), gb = g(b);
        if (ga * gb < 0.0) {
            for (int it = 0; it < 200 && b - a > 1e-17; ++it) {
                const double mid = 0.5 * (a + b), gm = g(mid);
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            return 0.5 * (a + b);
        }
        const double x = -B / (2.0 * A);
        if (!inside(x)) throw StructuralError("moebius_fixed_point: no root in interval");
        return clamp(x);
    }
    if (disc < 0.0) throw StructuralError("moebius_fixed_point: no real fixed point");
    const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    const double x1 = q / A;
    const double x2 = q != 0.0 ? C / q : x1;
    const bool in1 = inside(x1), in2 = inside(x2);
    if (in1 && in2) {
        // prefer the attracting one
        return std::abs(n.derivative(x1)) <= std::abs(n.derivative(x2)) ? clamp(x1) : clamp(x2);
    }
    if (in1) return clamp(x1);
    if (in2) return clamp(x2);
    throw StructuralError("moebius_fixed_point: no root in interval");
}

double fixed_point_x1(const Params& p) {
    const double r = p.r();
    if (r == 0.0) return 2.0 / 3.0;
    // (sqrt(9-4r) - (3-2r))/(2r), rationalized to avoid cancellation at small r
    const double s = std::sqrt(9.0 - 4.0 * r);
    return 2.0 * p.rho() / (s + 3.0 - 2.0 * r);
}

double partition_point_c(const Params& p, int n) {
    if (n < 0) throw DomainError("partition_point_c: n must be >= 0");
    if (n == 0) return 1.0;
    if (p.farey()) return 1.0 / (n + 1.0);
    const double d = p.delta();
    // rho^n - r = (rho^n - 1) + delta
    return d / (std::expm1(n * std::log1p(d)) + d);
}

double renorm_residual(const Params& p, double x) {
    const MoebiusMap phi = inverse_branch(p, 0);
    const double alpha = 3.0 - p.r();
    const double beta = (3.0 - p.r()) / (2.0 - p.r());
    return std::abs(alpha * phi(phi(x / beta)) - phi(x));
}

long long passage_time_tau(const Params& p, double x) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("passage_time_tau: x outside (0,1]");
    long long n;
    if (p.farey()) {
        const double inv = 1.0 / x;
        if (inv > 1e9) throw NumericError("passage_time_tau: passage time exceeds 1e9 cap");
        n = std::max(1LL, (long long)std::floor(inv));
    } else {
        const double d = p.delta();
        const double nstar = std::log1p(d * (1.0 / x - 1.0)) / std::log1p(d);
        if (nstar > 1e9) throw NumericError("passage_time_tau: passage time exceeds 1e9 cap");
        n = std::max(1LL, (long long)std::ceil(nstar));
    }
    // settle rounding at the ends so that c_n < x <= c_{n-1}
    while (partition_point_c(p, int(n)) >= x) ++n;
    while (n > 1 && partition_point_c(p, int(n - 1)) < x) --n;
    for (long long k : {n, n - 1}) {
        if (k < 1) continue;
        const double c = partition_point_c(p, int(k));
        if (std::abs(x - c) <= 1e-12 * c)
            throw PartitionPointError("passage_time_tau: x within guard of partition point c_" + std::to_string(k),
                                      int(k));
    }
    return n;
}

long long passage_time_by_iteration(const Params& p, double x, long long cap) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("passage_time_by_iteration: x outside (0,1]");
    long long n = 1;
    while (x < 0.5) {
        x = map_eval(p, x);
        if (++n > cap) throw NumericError("passage_time_by_iteration: cap exceeded");
    }
    return n;
}

double induced_map_eval(const Params& p, double x) {
    const long long n = passage_time_tau(p, x);
    const double c = partition_point_c(p, int(n - 1));
    return p.rho() / (p.delta() + p.r() * x) * ((c - x) / c);
}

double induced_derivative(const Params& p, double x) {
    const long long n = passage_time_tau(p, x);
    const double c = partition_point_c(p, int(n - 1));
    const double den = p.delta() + p.r() * x;
    return -p.rho() * (p.delta() + p.r() * c) / (c * den * den);
}

MoebiusMap induced_branch(const Params& p, int n) {
    if (n < 1) throw DomainError("induced_branch: n must be >= 1");
    const double c = partition_point_c(p, n - 1);
    return MoebiusMap{-p.rho(), p.rho() * c, p.r() * c, p.delta() * c}.normalized();
}

MoebiusMap induced_inverse(const Params& p, int n) { return induced_branch(p, n).inverse().normalized(); }

namespace {

void periodic_F_rec(const MoebiusMap* branches, const MoebiusMap& cur, int depth, int n, std::uint32_t bits,
                    const std::function<void(std::uint32_t, double, double)>& visit) {
    if (depth == n) {
        const double x = moebius_fixed_point(cur, 0.0, 1.0);
        visit(bits, x, cur.derivative(x));
        return;
    }
    for (int e = 0; e < 2; ++e)
        periodic_F_rec(branches, compose(cur, branches[e]), depth + 1, n, (bits << 1) | std::uint32_t(e), visit);
}

}  // namespace

void for_each_periodic_F(const Params& p, int n, const std::function<void(std::uint32_t, double, double)>& visit) {
    if (n < 1 || n > 24) throw DomainError("periodic points of F: need 1 <= n <= 24");
    const MoebiusMap br[2] = {inverse_branch(p, 0), inverse_branch(p, 1)};
    try {
        periodic_F_rec(br, MoebiusMap{}, 0, n, 0u, visit);
    } catch (const StructuralError& e) {
        throw StructuralError(std::string("periodic points of F: ") + e.what());
    }
}

std::vector<PeriodicPoint> periodic_points_F(const Params& p, int n) {
    std::vector<PeriodicPoint> out;
    out.reserve(std::size_t(1) << n);
    for_each_periodic_F(p, n, [&](std::uint32_t bits, double x, double dphi) {
        BranchWord w;
        w.symbols.resize(n);
        for (int i = 0; i < n; ++i) w.symbols[i] = int((bits >> (n - 1 - i)) & 1u);
        out.push_back({std::move(w), x, 1.0 / dphi});
    });
    return out;
}

double orbit_sum_F(const Params& p, int n) {
    Neumaier acc;
    for_each_periodic_F(p, n, [&](std::uint32_t, double, double dphi) { acc.add(std::abs(dphi)); });
    return acc.sum();
}

double induced_weight_bound(const Params& p, int a) {
    const double c = partition_point_c(p, a - 1);
    return c * (p.delta() + p.r() * c) / p.rho();
}

double induced_tail_bound(const Params& p, int cutoff, double z) {
    const double az = std::abs(z);
    if (p.farey()) {
        if (az > 1.0) return std::numeric_limits<double>::infinity();
        const double K = cutoff;
        double bound = std::pow(az, K + 1.0) / K;
        if (az < 1.0) bound = std::min(bound, std::pow(az, K + 1.0) / ((K + 1.0) * (K + 1.0) * (1.0 - az)));
        return bound;
    }
    if (az >= p.rho()) return std::numeric_limits<double>::infinity();
    return std::pow(az, cutoff + 1.0) * induced_weight_bound(p, cutoff + 1) / (1.0 - az / p.rho());
}

PeriodicPointsG periodic_points_G(const Params& p, int n, int cutoff) {
    if (n < 1 || n > 6) throw DomainError("periodic_points_G: need 1 <= n <= 6");
    if (cutoff < 1 || cutoff > 64) throw DomainError("periodic_points_G: need 1 <= cutoff <= 64");
    if (std::pow(double(cutoff), n) > double(1 << 26))
        throw DomainError("periodic_points_G: cutoff^n exceeds the enumeration budget 2^26");
    std::vector<MoebiusMap> inv(cutoff + 1);
    double S = 0.0;
    for (int a = 1; a <= cutoff; ++a) {
        inv[a] = induced_inverse(p, a);
        S += induced_weight_bound(p, a);
    }
    PeriodicPointsG res;
    Neumaier acc;
    std::vector<int> digits(n);
    std::function<void(const MoebiusMap&, int)> rec = [&](const MoebiusMap& cur, int depth) {
        if (depth == n) {
            double x;
            try {
                x = moebius_fixed_point(cur, 0.0, 1.0);
            } catch (const StructuralError& e) {
                std::string w;
                for (int d : digits) w += std::to_string(d) + ",";
                throw StructuralError("periodic_points_G: word (" + w + "): " + e.what());
            }
            const double dpsi = cur.derivative(x);
            acc.add(std::abs(dpsi));
            res.points.push_back({BranchWord{digits}, x, 1.0 / dpsi});
            return;
        }
        for (int a = 1; a <= cutoff; ++a) {
            digits[depth] = a;
            rec(compose(cur, inv[a]), depth + 1);
        }
    };
    rec(MoebiusMap{}, 0);
    res.weight_sum = acc.sum();
    const double T = induced_tail_bound(p, cutoff, 1.0);
    res.tail_bound = n * T * std::pow(S + T, n - 1);
    return res;
}

}  // namespace maps
}  // namespace ftlab
