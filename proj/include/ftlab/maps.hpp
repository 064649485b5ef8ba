#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ftlab {

// The family parameter r in [0,1]; rho = 2-r and delta = 1-r are derived.
class Params {
public:
    explicit Params(double r);

    double r() const { return r_; }
    double rho() const { return 2.0 - r_; }
    double delta() const { return 1.0 - r_; }
    bool tent() const { return r_ == 0.0; }
    bool farey() const { return r_ == 1.0; }

private:
    double r_;
};

// x -> (a x + b)/(c x + d)
struct MoebiusMap {
    double a = 1, b = 0, c = 0, d = 1;

    double operator()(double x) const { return (a * x + b) / (c * x + d); }
    double det() const { return a * d - b * c; }
    double derivative(double x) const {
        const double den = c * x + d;
        return det() / (den * den);
    }
    MoebiusMap inverse() const { return {d, -b, -c, a}; }
    // rescaled so that the largest coefficient has magnitude 1
    MoebiusMap normalized() const;
};

// (m1 o m2)(x) = m1(m2(x)); coefficients are the matrix product, normalized.
MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2);

// Symbols over {0,1} for F_r words, or digits >= 1 for G_r words.
struct BranchWord {
    std::vector<int> symbols;
    std::size_t size() const { return symbols.size(); }
    bool operator==(const BranchWord&) const = default;
    auto operator<=>(const BranchWord&) const = default;
};

struct PeriodicPoint {
    BranchWord word;
    double x;
    double multiplier;  // derivative of the n-th iterate at x
};

struct PeriodicPointsG {
    std::vector<PeriodicPoint> points;
    double weight_sum;  // sum of 1/|multiplier|
    double tail_bound;  // bound on the omitted words with some digit > cutoff
};

namespace maps {

double map_eval(const Params& p, double x);
double map_derivative(const Params& p, double x);

MoebiusMap inverse_branch(const Params& p, int i);
MoebiusMap inverse_branch_iterate(const Params& p, int n);

double moebius_fixed_point(const MoebiusMap& m, double lo, double hi);
double fixed_point_x1(const Params& p);

double partition_point_c(const Params& p, int n);
double renorm_residual(const Params& p, double x);

// Unique n >= 1 with c_n < x < c_{n-1}.
long long passage_time_tau(const Params& p, double x);
// Same quantity by iterating F_r until the orbit enters A_1; for testing.
long long passage_time_by_iteration(const Params& p, double x, long long cap = 1000000000LL);

double induced_map_eval(const Params& p, double x);
double induced_derivative(const Params& p, double x);
MoebiusMap induced_branch(const Params& p, int n);
// Inverse of the n-th induced branch: [0,1] -> A_n.
MoebiusMap induced_inverse(const Params& p, int n);

// Visits the 2^n fixed points of F_r^n in lexicographic word order.
// The callback gets (word bits, msb first; fixed point; Moebius derivative of the
// composite inverse branch at the fixed point).
void for_each_periodic_F(const Params& p, int n,
                         const std::function<void(std::uint32_t, double, double)>& visit);
std::vector<PeriodicPoint> periodic_points_F(const Params& p, int n);
// sum over fixed points of F^n of |(F^n)'(x)|^{-1}
double orbit_sum_F(const Params& p, int n);

// Fixed points of G_r^n over digit words with digits <= cutoff.
PeriodicPointsG periodic_points_G(const Params& p, int n, int cutoff);
// sup over A_a of 1/|G_{r,a}'|
double induced_weight_bound(const Params& p, int a);
// sum over a > cutoff of |z|^a * induced_weight_bound(a)
double induced_tail_bound(const Params& p, int cutoff, double z = 1.0);

}  // namespace maps
}  // namespace ftlab
