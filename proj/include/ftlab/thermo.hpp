#pragma once

#include <cstdint>
#include <utility>

#include "ftlab/maps.hpp"

namespace ftlab {

struct FreeEnergyEstimate {
    double beta;
    int n;
    double f_n;
    long long branch_count;
    int quadrature_order;
    double delta_prev;  // f_n - f_{n-1}; NaN for n = 1
};

struct RatePoint {
    double alpha;
    double phi;
    double richardson_gap;  // |f'(h) - f'(h/2)| from the halving check
};

struct RadiusBounds {
    double lower;
    double upper;
};

namespace thermo {

constexpr int default_quadrature_order = 32;

// Z_n(beta) = int |(F^n)'|^beta dp_r, by the exact branch decomposition.
double partition_Z(const Params& p, double beta, int n, int quadrature_order = default_quadrature_order);
// Monte Carlo estimate of the same quantity (oracle); returns {mean, std error}.
std::pair<double, double> partition_Z_monte_carlo(const Params& p, double beta, int n, long long samples,
                                                  std::uint64_t seed);
FreeEnergyEstimate free_energy(const Params& p, double beta, int n,
                               int quadrature_order = default_quadrature_order);
// lambda_r = chi_{nu_r}/nu_r([0,1])
double lambda_r(const Params& p);
double gamma_r(const Params& p);
RatePoint rate_function_point(const Params& p, double beta, int n, double h = 1e-4);
RadiusBounds ess_radius_bounds(const Params& p, int k);

}  // namespace thermo
}  // namespace ftlab
