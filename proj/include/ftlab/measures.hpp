#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ftlab/maps.hpp"

namespace ftlab {

// Seeded 64-bit source. Each operation draws from its own stream, derived
// from (seed, stream id) through std::seed_seq, so that adding draws in one
// operation never shifts another.
class Rng {
public:
    enum Stream : std::uint32_t { sample = 1, birkhoff = 2, kac = 3, partition_mc = 4 };

    Rng(std::uint64_t seed, std::uint32_t stream);
    // uniform on the open interval (0,1), 53-bit resolution
    double uniform();

private:
    std::mt19937_64 eng_;
};

enum class DensityKind { e, h };

struct DensityClosedForm {
    DensityKind kind;
    Params params;
    double K;

    double operator()(double x) const;
};

struct OrbitStats {
    long long n_samples = 0;
    double mean = 0.0;
    double variance_estimate = 0.0;  // variance of `mean`
    std::uint64_t seed = 0;
    long long restarts = 0;

    double std_error() const;
};

enum class BirkhoffMode { F_under_nu, G_under_mu };

namespace measures {

double normalizer_K(const Params& p);
DensityClosedForm density(const Params& p, DensityKind kind);
// nu_r([0,1]); +inf at r = 1
double nu_total(const Params& p);
// nu_r([a,b]) and mu_r([a,b]) in closed form
double nu_interval(const Params& p, double a, double b);
double mu_interval(const Params& p, double a, double b);

template <class F>
double pf_apply(const Params& p, F&& f, double x) {
    const MoebiusMap phi0 = maps::inverse_branch(p, 0);
    const double y = phi0(x);
    const double den = p.rho() + p.r() * x;
    return p.rho() / (den * den) * (f(y) + f(1.0 - y));
}

// <l> = log(1/delta)/log(2/rho); +inf at r = 1
double kac_expected_return(const Params& p);

double mu_inverse_cdf(const Params& p, double u);
std::vector<double> sample_mu(const Params& p, std::size_t count, std::uint64_t seed);

double lyapunov_closed(const Params& p);
OrbitStats lyapunov_birkhoff(const Params& p, BirkhoffMode mode, long long n_iter, long long burn_in = 1000,
                             std::uint64_t seed = 1);
// mean of tau under mu_r, i.i.d. draws
OrbitStats kac_monte_carlo(const Params& p, long long count, std::uint64_t seed);

}  // namespace measures
}  // namespace ftlab
