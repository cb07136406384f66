#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "heatwalk/model.hpp"
#include "heatwalk/numeric.hpp"
#include "heatwalk/step.hpp"

namespace heatwalk {

namespace detail {

// Guarded integer power of the one-step characteristic value: psi^steps by
// repeated squaring (no complex log, hence no branch ambiguity).
inline Complex guarded_char_power(Complex psi, long long steps) {
    const double mag = std::abs(psi);
    if (mag > 0.0 && static_cast<double>(steps) * std::log(mag) > 700.0)
        throw std::range_error(
            "characteristic power overflows double range; lambda too far from "
            "the stable disc");
    const Complex value = cpow_int(psi, steps);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw std::range_error("characteristic power is not finite");
    return value;
}

}  // namespace detail

// psi_n(lambda) = psi_xi(lambda n^{-1/N})^n, the characteristic function of
// the normalized walk S~_n.
inline Complex char_S_scaled(const ModelParams& params, long long n, Complex lambda) {
    if (n < 1) throw std::invalid_argument("char_S_scaled: n must be >= 1");
    const StepDistribution step(params);
    const double scale = std::pow(static_cast<double>(n), -1.0 / params.order);
    return detail::guarded_char_power(step.char_fn(lambda * scale), n);
}

// E[e^{i lambda W_n(t)}]: psi_xi(lambda n^{-1/N})^{floor(nt)} for t >= 0;
// for t < 0 the walk is rotated, so lambda picks up the factor e^{i pi/N}
// and the step count is floor(n |t|).
inline Complex char_W(const ModelParams& params, long long n, double t,
                      Complex lambda) {
    if (n < 1) throw std::invalid_argument("char_W: n must be >= 1");
    const StepDistribution step(params);
    const double scale = std::pow(static_cast<double>(n), -1.0 / params.order);
    const Complex lam_eff =
        t < 0.0 ? lambda * std::polar(1.0, kPi / params.order) : lambda;
    return detail::guarded_char_power(step.char_fn(lam_eff * scale),
                                      floor_steps(n, t));
}

// Limit characteristic function exp(i^N alpha lambda^N t / N!), defined for
// all real t (the "stable distribution of order N", which exists only as a
// limit of expectations).
inline Complex limit_char(const ModelParams& params, double t, Complex lambda) {
    const Complex exponent = imag_unit_pow(params.order) * params.alpha *
                             cpow_int(lambda, params.order) * t /
                             to_double(factorial_big(params.order));
    return std::exp(exponent);
}

// The constant in Theorem-4's rate: lim n (psi_n - limit) =
// (-1)^N (1/(2N)! - 1/(2 (N!)^2)) alpha^2 lambda^{2N} exp(i^N alpha lambda^N / N!).
inline Complex clt_error_constant(const ModelParams& params, Complex lambda) {
    const long long N = params.order;
    const BigRational coeff =
        BigRational(1, factorial_big(2 * N)) -
        BigRational(1, 2 * factorial_big(N) * factorial_big(N));
    const double sign = (N % 2 == 0) ? 1.0 : -1.0;
    return sign * to_double(coeff) * params.alpha * params.alpha *
           cpow_int(lambda, 2 * N) * limit_char(params, 1.0, lambda);
}

/**
 * Exact split of the finite-n error: char_W - limit = f_n + g_n, where g_n
 * carries the clock discretisation (floor(nt)/n - t) and is bounded by
 * g_bound = |alpha lambda^N| / (n N!) |limit|; f_n is the remainder, with
 * n f_n converging to the second-order constant.
 */
struct ErrorDecomposition {
    Complex f_n;
    Complex g_n;
    double g_bound;
};

inline ErrorDecomposition error_decomposition(const ModelParams& params, long long n,
                                              double t, Complex lambda) {
    if (n < 1) throw std::invalid_argument("error_decomposition: n must be >= 1");
    const long long N = params.order;
    const double fact_n = to_double(factorial_big(N));
    const Complex limit = limit_char(params, t, lambda);
    const double ratio_abs =
        static_cast<double>(floor_steps(n, t)) / static_cast<double>(n);
    const double clock = (t < 0.0 ? -ratio_abs : ratio_abs) - t;
    const Complex deriv =
        imag_unit_pow(N) * cpow_int(lambda, N) * params.alpha / fact_n;

    ErrorDecomposition dec;
    dec.g_n = clock * deriv * limit;
    dec.f_n = char_W(params, n, t, lambda) - limit - dec.g_n;
    dec.g_bound = std::abs(params.alpha * cpow_int(lambda, N)) / fact_n *
                  std::abs(limit) / static_cast<double>(n);
    return dec;
}

// K(t, alpha, lambda) of Corollary-1's bound |char_W - limit| < (1+eps) K / n.
inline double error_bound_K(const ModelParams& params, double t, Complex lambda) {
    const long long N = params.order;
    const double fact_n = to_double(factorial_big(N));
    const BigRational coeff =
        BigRational(1, 2 * factorial_big(N) * factorial_big(N)) -
        BigRational(1, factorial_big(2 * N));
    const double lam_n = std::abs(cpow_int(lambda, N));
    const double lam_2n = std::abs(cpow_int(lambda, 2 * N));
    const double a = std::abs(params.alpha);
    return std::abs(limit_char(params, t, lambda)) *
           (a * lam_n / fact_n + a * a * std::abs(t) * lam_2n * to_double(coeff));
}

// E[S~_n^k] from the Faa di Bruno expansion of psi_n = psi_xi(./n^{1/N})^n
// at lambda = 0, using the falling factorial n (n-1) ... (n - sum m_j + 1).
// Only multiplicity tuples supported on multiples of N contribute, each
// carrying the single power alpha^{k/N}, so the rational prefactor is exact.
inline Complex moment_faadibruno(const ModelParams& params, long long n, long long k) {
    if (k < 1) throw std::invalid_argument("moment_faadibruno: k must be >= 1");
    if (n <= k)
        throw std::invalid_argument("moment_faadibruno: requires n > k");
    const long long N = params.order;
    if (k % N != 0) return {0.0, 0.0};
    const long long parts = k / N;  // partitions of `parts`; part s maps to j = s N

    BigRational sum = 0;
    std::vector<long long> mult(parts + 1, 0);
    const BigInt k_fact = factorial_big(k);

    auto recurse = [&](auto&& self, long long remaining, long long max_part) -> void {
        if (remaining == 0) {
            long long m_total = 0;
            BigInt denom = 1;
            for (long long s = 1; s <= parts; ++s) {
                if (mult[s] == 0) continue;
                m_total += mult[s];
                denom *= factorial_big(mult[s]);
                denom *= bigint_pow(factorial_big(s * N),
                                    static_cast<unsigned long long>(mult[s]));
            }
            denom *= bigint_pow(BigInt(n), static_cast<unsigned long long>(parts));
            sum += BigRational(k_fact * falling_factorial_big(n, m_total), denom);
            return;
        }
        for (long long s = std::min(max_part, remaining); s >= 1; --s) {
            ++mult[s];
            self(self, remaining - s, s);
            --mult[s];
        }
    };
    recurse(recurse, parts, parts);
    return cpow_int(params.alpha, parts) * to_double(sum);
}

// Limit moment: (alpha/N!)^{m/N} m! / (m/N)! when N | m, zero otherwise.
inline Complex moment_limit(const ModelParams& params, long long m) {
    if (m < 0) throw std::invalid_argument("moment_limit: m must be >= 0");
    const long long N = params.order;
    if (m % N != 0) return {0.0, 0.0};
    const long long M = m / N;
    const BigRational coeff(
        factorial_big(m),
        factorial_big(M) * bigint_pow(factorial_big(N),
                                      static_cast<unsigned long long>(M)));
    return cpow_int(params.alpha, M) * to_double(coeff);
}

}  // namespace heatwalk
