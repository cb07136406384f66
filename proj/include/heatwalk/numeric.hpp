#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace heatwalk {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// i^n computed exactly (no trig round-off).
inline Complex imag_unit_pow(long long n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// z^n by binary exponentiation; n >= 0.
inline Complex cpow_int(Complex z, long long n) {
    Complex result{1.0, 0.0};
    while (n > 0) {
        if (n & 1) result *= z;
        z *= z;
        n >>= 1;
    }
    return result;
}

// x^n for real base, n >= 0, by repeated multiplication.
inline double rpow_int(double x, long long n) {
    double result = 1.0;
    double base = x;
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

inline BigInt factorial_big(long long n) {
    BigInt f = 1;
    for (long long k = 2; k <= n; ++k) f *= k;
    return f;
}

// n (n-1) ... (n-m+1); equals 0 once m > n.
inline BigInt falling_factorial_big(long long n, long long m) {
    BigInt f = 1;
    for (long long k = 0; k < m; ++k) f *= (n - k);
    return f;
}

inline BigInt bigint_pow(BigInt base, unsigned long long e) {
    BigInt result = 1;
    while (e > 0) {
        if (e & 1ULL) result *= base;
        base *= base;
        e >>= 1ULL;
    }
    return result;
}

inline double to_double(const BigRational& r) { return r.convert_to<double>(); }

inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

inline int euler_phi(int n) {
    int result = n;
    int m = n;
    for (int p = 2; static_cast<long long>(p) * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int p = 2; static_cast<long long>(p) * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// Step count of the piecewise-constant clock: floor(n |t|).
inline long long floor_steps(long long n, double t) {
    return static_cast<long long>(std::floor(static_cast<double>(n) * std::abs(t)));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

inline LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("linear_fit: need at least two matching points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

// Slope of log|y| against log(x); pairs with y == 0 are skipped.
inline LinearFit log_log_fit(std::span<const double> xs, std::span<const double> ys) {
    std::vector<double> lx, ly;
    lx.reserve(xs.size());
    ly.reserve(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] == 0.0 || xs[i] <= 0.0) continue;
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(std::abs(ys[i])));
    }
    return linear_fit(lx, ly);
}

struct Mat2 {
    double xx = 0, xy = 0, yx = 0, yy = 0;
};

}  // namespace heatwalk
