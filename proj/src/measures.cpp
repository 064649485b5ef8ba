#include "ftlab/measures.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ftlab/errors.hpp"
#include "ftlab/specfun.hpp"

namespace ftlab {

Rng::Rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{std::uint32_t(seed & 0xffffffffu), std::uint32_t(seed >> 32), stream, 0x9e3779b9u};
    eng_.seed(seq);
}

double Rng::uniform() {
    for (;;) {
        const double u = double(eng_() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

double DensityClosedForm::operator()(double x) const {
    const double base = kind == DensityKind::e ? params.delta() : params.rho();
    return K / (base + params.r() * x);
}

double OrbitStats::std_error() const { return std::sqrt(variance_estimate); }

namespace measures {

namespace {

// log(2/rho) = -log(1 - r/2)
double log_two_over_rho(const Params& p) { return -std::log1p(-0.5 * p.r()); }

struct Accum {
    std::vector<double> batch_means;
    double cur = 0.0;
    long long in_batch = 0;
    long long batch_size;
    explicit Accum(long long bs) : batch_size(bs) {}
    void add(double v) {
        cur += v;
        if (++in_batch == batch_size) {
            batch_means.push_back(cur / double(batch_size));
            cur = 0.0;
            in_batch = 0;
        }
    }
};

OrbitStats batch_stats(const std::vector<double>& bm, long long batch_size, std::uint64_t seed, long long restarts) {
    OrbitStats s;
    s.seed = seed;
    s.restarts = restarts;
    const double B = double(bm.size());
    double mean = 0.0;
    for (double v : bm) mean += v;
    mean /= B;
    double var = 0.0;
    for (double v : bm) var += (v - mean) * (v - mean);
    var /= (B - 1.0);
    s.mean = mean;
    s.variance_estimate = var / B;
    s.n_samples = (long long)bm.size() * batch_size;
    return s;
}

}  // namespace

double normalizer_K(const Params& p) {
    if (p.tent()) return 2.0;
    if (p.farey()) return 1.0 / std::numbers::ln2;
    return p.r() / log_two_over_rho(p);
}

DensityClosedForm density(const Params& p, DensityKind kind) { return {kind, p, normalizer_K(p)}; }

double nu_total(const Params& p) {
    if (p.farey()) return std::numeric_limits<double>::infinity();
    if (p.tent()) return 2.0;
    return -std::log1p(-p.r()) / log_two_over_rho(p);
}

double nu_interval(const Params& p, double a, double b) {
    if (p.tent()) return 2.0 * (b - a);
    const double d = p.delta(), r = p.r();
    if (p.farey() && a <= 0.0) return std::numeric_limits<double>::infinity();
    return normalizer_K(p) / r * std::log((d + r * b) / (d + r * a));
}

double mu_interval(const Params& p, double a, double b) {
    if (p.tent()) return b - a;
    const double rho = p.rho(), r = p.r();
    return normalizer_K(p) / r * std::log((rho + r * b) / (rho + r * a));
}

double kac_expected_return(const Params& p) { return nu_total(p); }

double mu_inverse_cdf(const Params& p, double u) {
    if (p.tent()) return u;
    // H(x) = log(1 + r x/rho)/log(2/rho)
    return p.rho() / p.r() * std::expm1(u * log_two_over_rho(p));
}

std::vector<double> sample_mu(const Params& p, std::size_t count, std::uint64_t seed) {
    Rng rng(seed, Rng::sample);
    std::vector<double> out(count);
    for (auto& x : out) x = mu_inverse_cdf(p, rng.uniform());
    return out;
}

double lyapunov_closed(const Params& p) {
    constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    constexpr double ln2 = std::numbers::ln2;
    if (p.tent()) return 2.0 * ln2;
    if (p.farey()) return pi2_6 / ln2;
    const double r = p.r();
    const double L = log_two_over_rho(p);
    const double bracket = pi2_6 - ln2 * ln2 - 2.0 * specfun::dilog(1.0 / p.rho());
    return std::log(p.rho()) * (-std::log1p(-r)) / L - std::log(4.0 - 2.0 * r) - bracket / L;
}

namespace {

struct InducedStep {
    double next;
    double log_abs_deriv;
};

InducedStep induced_step(const Params& p, double x) {
    const long long n = maps::passage_time_tau(p, x);
    const double c = maps::partition_point_c(p, int(n - 1));
    const double den = p.delta() + p.r() * x;
    const double next = p.rho() / den * ((c - x) / c);
    const double deriv = p.rho() * (p.delta() + p.r() * c) / (c * den * den);
    return {next, std::log(deriv)};
}

}  // namespace

OrbitStats lyapunov_birkhoff(const Params& p, BirkhoffMode mode, long long n_iter, long long burn_in,
                             std::uint64_t seed) {
    if (mode == BirkhoffMode::F_under_nu && p.farey())
        throw UnsupportedMode("F-mode Birkhoff average is unsupported at r = 1 (infinite invariant measure)");
    if (n_iter < 2) throw DomainError("lyapunov_birkhoff: n_iter must be >= 2");
    Rng rng(seed, Rng::birkhoff);
    const long long batches = std::min<long long>(100, n_iter);
    const long long bs = n_iter / batches;
    Accum acc(bs);
    long long restarts = 0;
    double x = mu_inverse_cdf(p, rng.uniform());

    // Floating-point orbits can land exactly on 0 (an absorbing point in
    // double arithmetic) or on a partition point; those restart from a fresh draw.
    auto restart = [&] {
        ++restarts;
        x = mu_inverse_cdf(p, rng.uniform());
    };
    auto step = [&](bool record) {
        for (;;) {
            if (mode == BirkhoffMode::F_under_nu) {
                if (x <= 0.0 || x > 1.0) {
                    restart();
                    continue;
                }
                const double v = std::log(std::abs(maps::map_derivative(p, x)));
                x = maps::map_eval(p, x);
                if (record) acc.add(v);
                return;
            }
            if (x <= 0.0 || x > 1.0) {
                restart();
                continue;
            }
            try {
                const InducedStep s = induced_step(p, x);
                x = s.next;
                if (record) acc.add(s.log_abs_deriv);
                return;
            } catch (const DomainError&) {
                restart();
            } catch (const NumericError&) {
                restart();
            }
        }
    };
    for (long long i = 0; i < burn_in; ++i) step(false);
    for (long long i = 0; i < batches * bs; ++i) step(true);
    return batch_stats(acc.batch_means, bs, seed, restarts);
}

OrbitStats kac_monte_carlo(const Params& p, long long count, std::uint64_t seed) {
    if (p.farey()) throw UnsupportedMode("Kac average diverges at r = 1");
    if (count < 2) throw DomainError("kac_monte_carlo: count must be >= 2");
    Rng rng(seed, Rng::kac);
    double sum = 0.0, sum2 = 0.0;
    long long rejected = 0;
    for (long long i = 0; i < count; ++i) {
        double t;
        for (;;) {
            try {
                t = double(maps::passage_time_tau(p, mu_inverse_cdf(p, rng.uniform())));
                break;
            } catch (const DomainError&) {
                ++rejected;
            }
        }
        sum += t;
        sum2 += t * t;
    }
    OrbitStats s;
    s.n_samples = count;
    s.mean = sum / count;
    s.variance_estimate = (sum2 / count - s.mean * s.mean) * count / (count - 1.0) / count;
    s.seed = seed;
    s.restarts = rejected;
    return s;
}

}  // namespace measures
}  // namespace ftlab
