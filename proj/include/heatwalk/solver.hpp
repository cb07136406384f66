#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

#include "heatwalk/charfn.hpp"
#include "heatwalk/model.hpp"
#include "heatwalk/numeric.hpp"
#include "heatwalk/rng.hpp"
#include "heatwalk/spectral.hpp"
#include "heatwalk/step.hpp"
#include "heatwalk/walk.hpp"

namespace heatwalk {

enum class SolveMethod { spectral, walk_exact, walk_mc };

struct SolveRequest {
    ModelParams params;
    Datum datum;
    double t = 0.0;
    double t0 = 0.0;  // shifted away internally; the construction is
                      // invariant under time shifts
    std::vector<double> x_grid;
    long long n = 1;
    SolveMethod method = SolveMethod::spectral;
    long long replicas = 1;    // walk_mc only
    std::uint64_t seed = 0;    // walk_mc only
    int workers = 1;
};

struct SolveResult {
    std::vector<Complex> values;
    std::vector<double> std_errors;  // empty unless walk_mc
};

// u_n(t, x) = sum_j c_j e^{i x y_j} E[e^{i W_n(t) y_j}]: the finite-n value
// with no sampling error (Fubini over the finitely many walk values).
inline std::vector<Complex> solve_walk_exact(const ModelParams& params,
                                             const Datum& datum, double t,
                                             const std::vector<double>& x_grid,
                                             long long n) {
    const auto& atoms = datum.measure.atoms();
    std::vector<Complex> walk_chars;
    walk_chars.reserve(atoms.size());
    for (const Atom& a : atoms)
        walk_chars.push_back(char_W(params, n, t, Complex{a.y, 0.0}));
    std::vector<Complex> values;
    values.reserve(x_grid.size());
    for (double x : x_grid) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < atoms.size(); ++j)
            acc += atoms[j].c * std::exp(Complex{0.0, x * atoms[j].y}) * walk_chars[j];
        values.push_back(acc);
    }
    return values;
}

namespace detail {

// Per-frequency Monte Carlo moments of E_j = e^{i W y_j}: mean vector and
// Hermitian second-moment matrix. The estimate at any x is a fixed linear
// combination of the E_j, so the walk cost is independent of the grid size.
struct McAtomMoments {
    std::vector<Complex> mean;                  // E[E_j]
    std::vector<std::vector<Complex>> second;   // E[E_j conj(E_k)], full matrix
    long long replicas = 0;
};

inline McAtomMoments mc_atom_moments(const ModelParams& params,
                                     const std::vector<double>& freqs, double t,
                                     long long n, long long replicas,
                                     std::uint64_t seed, int workers) {
    const StepDistribution step(params);
    const long long steps = floor_steps(n, t);
    const double scale = std::pow(static_cast<double>(n), -1.0 / params.order);
    const Complex rot =
        t < 0.0 ? std::polar(1.0, kPi / params.order) : Complex{1.0, 0.0};
    const std::size_t J = freqs.size();

    constexpr long long kBlock = 8192;
    const long long blocks = (replicas + kBlock - 1) / kBlock;

    struct BlockSums {
        std::vector<Complex> mean;
        std::vector<Complex> second;  // row-major upper triangle j <= k
    };
    std::vector<BlockSums> partials(static_cast<std::size_t>(blocks));
    const std::size_t tri = J * (J + 1) / 2;

    auto run_block = [&](long long b) {
        BlockSums sums;
        sums.mean.assign(J, Complex{0.0, 0.0});
        sums.second.assign(tri, Complex{0.0, 0.0});
        std::vector<Complex> factors(J);
        const long long lo = b * kBlock;
        const long long hi = std::min(replicas, lo + kBlock);
        for (long long r = lo; r < hi; ++r) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
            Complex pos{0.0, 0.0};
            for (long long s = 0; s < steps; ++s) pos += step.sample(rng).value;
            const Complex w = rot * pos * scale;
            const Complex iw = Complex{0.0, 1.0} * w;
            for (std::size_t j = 0; j < J; ++j) factors[j] = std::exp(iw * freqs[j]);
            std::size_t idx = 0;
            for (std::size_t j = 0; j < J; ++j) {
                sums.mean[j] += factors[j];
                for (std::size_t k = j; k < J; ++k, ++idx)
                    sums.second[idx] += factors[j] * std::conj(factors[k]);
            }
        }
        partials[static_cast<std::size_t>(b)] = std::move(sums);
    };

    if (workers <= 1) {
        for (long long b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<long long> next{0};
        std::vector<std::thread> pool;
        const int count = std::min<long long>(workers, blocks);
        pool.reserve(static_cast<std::size_t>(count));
        for (int w = 0; w < count; ++w)
            pool.emplace_back([&] {
                for (long long b = next.fetch_add(1); b < blocks; b = next.fetch_add(1))
                    run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    // Fixed-order reduction over blocks: the result does not depend on the
    // worker count.
    McAtomMoments moments;
    moments.replicas = replicas;
    moments.mean.assign(J, Complex{0.0, 0.0});
    moments.second.assign(J, std::vector<Complex>(J, Complex{0.0, 0.0}));
    std::vector<Complex> tri_sum(tri, Complex{0.0, 0.0});
    std::vector<Complex> mean_sum(J, Complex{0.0, 0.0});
    for (const BlockSums& b : partials) {
        for (std::size_t j = 0; j < J; ++j) mean_sum[j] += b.mean[j];
        for (std::size_t i = 0; i < tri; ++i) tri_sum[i] += b.second[i];
    }
    const double inv = 1.0 / static_cast<double>(replicas);
    for (std::size_t j = 0; j < J; ++j) moments.mean[j] = mean_sum[j] * inv;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = j; k < J; ++k, ++idx) {
            moments.second[j][k] = tri_sum[idx] * inv;
            moments.second[k][j] = std::conj(moments.second[j][k]);
        }
    return moments;
}

}  // namespace detail

// Monte Carlo estimate of u_n(t, x) = E[f(x + W_n(t))] with per-point
// standard errors. Replicas are seeded by counter and reduced in fixed
// order, so a given seed yields bit-identical output for any worker count.
inline SolveResult solve_walk_mc(const ModelParams& params, const Datum& datum,
                                 double t, const std::vector<double>& x_grid,
                                 long long n, long long replicas,
                                 std::uint64_t seed, int workers = 1) {
    if (replicas < 1)
        throw std::invalid_argument("solve_walk_mc: replicas must be >= 1");
    const auto& atoms = datum.measure.atoms();
    std::vector<double> freqs;
    freqs.reserve(atoms.size());
    for (const Atom& a : atoms) freqs.push_back(a.y);
    const auto moments =
        detail::mc_atom_moments(params, freqs, t, n, replicas, seed, workers);

    SolveResult result;
    result.values.reserve(x_grid.size());
    result.std_errors.reserve(x_grid.size());
    const std::size_t J = freqs.size();
    std::vector<Complex> coeff(J);
    for (double x : x_grid) {
        for (std::size_t j = 0; j < J; ++j)
            coeff[j] = atoms[j].c * std::exp(Complex{0.0, x * atoms[j].y});
        Complex mean{0.0, 0.0};
        for (std::size_t j = 0; j < J; ++j) mean += coeff[j] * moments.mean[j];
        // E|f|^2 - |E f|^2 through the atom-factor second moments.
        double second = 0.0;
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = 0; k < J; ++k)
                second += (coeff[j] * std::conj(coeff[k]) * moments.second[j][k]).real();
        const double variance = std::max(second - std::norm(mean), 0.0);
        const double denom =
            replicas > 1 ? static_cast<double>(replicas - 1) : 1.0;
        result.values.push_back(mean);
        result.std_errors.push_back(std::sqrt(variance / denom));
    }
    return result;
}

// C(t) of the convergence remark: |u - u_n| <= (1 + eps) C(t) / n past a
// finite threshold.
inline double error_bound_C(const ModelParams& params, const Datum& datum, double t) {
    const long long N = params.order;
    const double fact_n = to_double(factorial_big(N));
    const BigRational coeff =
        BigRational(1, 2 * factorial_big(N) * factorial_big(N)) -
        BigRational(1, factorial_big(2 * N));
    double first = 0.0, second = 0.0;
    for (const Atom& a : datum.measure.atoms()) {
        const double mt = std::abs(multiplier_factor(params, a.y, t));
        const double yn = rpow_int(std::abs(a.y), N);
        first += std::abs(a.c) * yn * mt;
        second += std::abs(a.c) * yn * yn * mt;
    }
    const double a = std::abs(params.alpha);
    return a / fact_n * first + a * a * std::abs(t) * to_double(coeff) * second;
}

struct ConvergenceReport {
    std::vector<long long> n_grid;
    std::vector<double> sup_errors;   // sup over the x-grid of |u_n - u|
    double slope = 0.0;               // log-log fit of sup_errors vs n
    double fit_residual = 0.0;
    std::vector<double> bound_curve;  // (1 + eps) C(t) / n with eps = 0.1
    bool bound_satisfied = false;     // errors below the curve from threshold on
    long long threshold_n = -1;
    double c_of_t = 0.0;
};

inline ConvergenceReport convergence_study(const ModelParams& params,
                                           const Datum& datum, double t,
                                           const std::vector<double>& x_grid,
                                           const std::vector<long long>& n_grid) {
    if (n_grid.size() < 4 || !std::is_sorted(n_grid.begin(), n_grid.end()))
        throw std::invalid_argument(
            "convergence_study: n_grid must be increasing with length >= 4");
    if (x_grid.empty())
        throw std::invalid_argument("convergence_study: x_grid must be nonempty");

    ConvergenceReport report;
    report.n_grid = n_grid;
    report.c_of_t = error_bound_C(params, datum, t);
    std::vector<Complex> oracle;
    oracle.reserve(x_grid.size());
    for (double x : x_grid) oracle.push_back(exact_solution(params, datum, t, x));

    for (long long n : n_grid) {
        const auto values = solve_walk_exact(params, datum, t, x_grid, n);
        double sup = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            sup = std::max(sup, std::abs(values[i] - oracle[i]));
        report.sup_errors.push_back(sup);
        report.bound_curve.push_back(1.1 * report.c_of_t / static_cast<double>(n));
    }

    std::vector<double> ns(n_grid.begin(), n_grid.end());
    const LinearFit fit = log_log_fit(ns, report.sup_errors);
    report.slope = fit.slope;
    report.fit_residual = fit.residual_rms;

    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        bool holds = true;
        for (std::size_t j = i; j < n_grid.size(); ++j)
            if (report.sup_errors[j] > report.bound_curve[j]) {
                holds = false;
                break;
            }
        if (holds) {
            report.bound_satisfied = true;
            report.threshold_n = n_grid[i];
            break;
        }
    }
    return report;
}

inline SolveResult solve(const SolveRequest& req) {
    if (req.x_grid.empty())
        throw std::invalid_argument("solve: x_grid must be nonempty");
    if (req.n < 1) throw std::invalid_argument("solve: n must be >= 1");
    const double t = req.t - req.t0;
    SolveResult result;
    switch (req.method) {
        case SolveMethod::spectral:
            result.values.reserve(req.x_grid.size());
            for (double x : req.x_grid)
                result.values.push_back(exact_solution(req.params, req.datum, t, x));
            return result;
        case SolveMethod::walk_exact:
            result.values = solve_walk_exact(req.params, req.datum, t, req.x_grid, req.n);
            return result;
        case SolveMethod::walk_mc:
            return solve_walk_mc(req.params, req.datum, t, req.x_grid, req.n,
                                 req.replicas, req.seed, req.workers);
    }
    throw std::logic_error("solve: unknown method");
}

}  // namespace heatwalk
