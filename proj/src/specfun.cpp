#include "ftlab/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ftlab/errors.hpp"

namespace ftlab::specfun {

namespace {

double bessel_series(int p, double x) {
    const double h = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= p; ++i) term *= h / i;
    double sum = term;
    const double h2 = h * h;
    for (int m = 1; m < 200; ++m) {
        term *= -h2 / (double(m) * double(m + p));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Miller's algorithm: backward recurrence normalized by J_0 + 2 sum J_2k = 1.
double bessel_miller(int p, double x) {
    const int top = std::max(p, int(x)) + 20 + int(std::sqrt(60.0 * std::max<double>(p, x)));
    const int start = top + (top & 1);
    double jp1 = 0.0, j = 1e-300, norm = 0.0, want = 0.0;
    for (int k = start; k >= 1; --k) {
        const double jm1 = (2.0 * k / x) * j - jp1;
        jp1 = j;
        j = jm1;
        if (k - 1 == p) want = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            want *= 1e-250;
        }
    }
    norm += j;
    if (p == 0) want = j;
    return want / norm;
}

double bessel_hankel(int p, double x) {
    const double mu = 4.0 * p * p;
    double P = 1.0, Q = 0.0, a = 1.0, prev = 1e300;
    for (int k = 1; k < 200; ++k) {
        const double f = 2.0 * k - 1.0;
        a *= (mu - f * f) / (k * 8.0 * x);
        if (std::abs(a) > prev) break;
        prev = std::abs(a);
        switch (k % 4) {
            case 1: Q += a; break;
            case 2: P -= a; break;
            case 3: Q -= a; break;
            case 0: P += a; break;
        }
        if (std::abs(a) < 1e-17) break;
    }
    // cos(x - phi), sin(x - phi) with phi = (2p+1) pi/4, expanded to avoid
    // losing the phase in a large argument.
    const double phi = (2.0 * p + 1.0) * std::numbers::pi / 4.0;
    const double cx = std::cos(x), sx = std::sin(x), cp = std::cos(phi), sp = std::sin(phi);
    const double c = cx * cp + sx * sp;
    const double s = sx * cp - cx * sp;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * c - Q * s);
}

}  // namespace

double bessel_j(int p, double x) {
    if (p < 0) throw DomainError("bessel_j: negative order");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j: x must be finite and >= 0");
    if (x == 0.0) return p == 0 ? 1.0 : 0.0;
    if (x <= 8.0) return bessel_series(p, x);
    if (x > 25.0 && p <= 8) return bessel_hankel(p, x);
    return bessel_miller(p, x);
}

double laguerre(int k, double alpha, double x) {
    if (k < 0) throw DomainError("laguerre: negative degree");
    if (k == 0) return 1.0;
    double lm1 = 1.0, l = 1.0 + alpha - x;
    for (int n = 1; n < k; ++n) {
        const double next = ((2.0 * n + 1.0 + alpha - x) * l - (n + alpha) * lm1) / (n + 1.0);
        lm1 = l;
        l = next;
    }
    if (!std::isfinite(l))
        throw NumericError("laguerre: overflow at k=" + std::to_string(k) + " x=" + std::to_string(x));
    return l;
}

long double laguerre_ld(int k, long double alpha, long double x) {
    if (k < 0) throw DomainError("laguerre: negative degree");
    if (k == 0) return 1.0L;
    long double lm1 = 1.0L, l = 1.0L + alpha - x;
    for (int n = 1; n < k; ++n) {
        const long double next = ((2.0L * n + 1.0L + alpha - x) * l - (n + alpha) * lm1) / (n + 1.0L);
        lm1 = l;
        l = next;
    }
    if (!std::isfinite(l)) throw NumericError("laguerre: overflow at k=" + std::to_string(k));
    return l;
}

void laguerre_all_ld(int n, long double alpha, long double x, long double* out) {
    if (n <= 0) return;
    out[0] = 1.0L;
    if (n == 1) return;
    out[1] = 1.0L + alpha - x;
    for (int k = 1; k + 1 < n; ++k)
        out[k + 1] = ((2.0L * k + 1.0L + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1.0L);
}

namespace {

double dilog_series(double q) {
    double sum = 0.0, p = q;
    for (int k = 1; k < 200; ++k) {
        const double t = p / (double(k) * k);
        sum += t;
        if (std::abs(t) < 1e-18 * std::abs(sum)) break;
        p *= q;
    }
    return sum;
}

}  // namespace

double dilog(double q) {
    constexpr double z2 = std::numbers::pi * std::numbers::pi / 6.0;
    if (!(q <= 1.0)) throw DomainError("dilog: q > 1");
    if (q == 1.0) return z2;
    if (q == 0.0) return 0.0;
    if (q > 0.5) return z2 - std::log(q) * std::log1p(-q) - dilog_series(1.0 - q);
    if (q >= -0.5) return dilog_series(q);
    if (q >= -1.0) {
        // Landen: q/(q-1) lies in [1/3, 1/2]
        const double l = std::log1p(-q);
        return -dilog_series(q / (q - 1.0)) - 0.5 * l * l;
    }
    const double l = std::log(-q);
    return -z2 - 0.5 * l * l - dilog(1.0 / q);
}

}  // namespace ftlab::specfun
