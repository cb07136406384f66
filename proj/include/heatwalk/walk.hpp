#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "heatwalk/cyclotomic.hpp"
#include "heatwalk/errors.hpp"
#include "heatwalk/model.hpp"
#include "heatwalk/numeric.hpp"
#include "heatwalk/rng.hpp"
#include "heatwalk/step.hpp"

namespace heatwalk {

inline constexpr std::size_t kDefaultStateCap = 10'000'000;

/**
 * Exact law of the walk S_n on the cyclotomic lattice: canonical position ->
 * path count, with total N^n. Probabilities are count / N^n, exact.
 */
class ExactDistribution {
public:
    ExactDistribution(ModelParams params, long long steps,
                      std::map<CyclotomicPoint, BigInt> entries)
        : params_(params), steps_(steps), entries_(std::move(entries)) {
        total_ = bigint_pow(BigInt(params_.order),
                            static_cast<unsigned long long>(steps_));
    }

    const ModelParams& params() const { return params_; }
    long long steps() const { return steps_; }
    const std::map<CyclotomicPoint, BigInt>& entries() const { return entries_; }
    const BigInt& total() const { return total_; }

    BigRational probability(const CyclotomicPoint& p) const {
        auto it = entries_.find(p);
        if (it == entries_.end()) return BigRational(0);
        return BigRational(it->second, total_);
    }

    // k-th complex moment of the scaled walk: sum_z (scale z)^k count(z)/N^n.
    Complex moment(long long k, double scale) const {
        Complex acc{0.0, 0.0};
        const double tot = to_double(total_);
        for (const auto& [point, count] : entries_) {
            const Complex z = point.to_complex(params_, scale);
            acc += cpow_int(z, k) * (to_double(count) / tot);
        }
        return acc;
    }

    bool operator==(const ExactDistribution& other) const {
        return params_.order == other.params_.order && steps_ == other.steps_ &&
               entries_ == other.entries_;
    }

private:
    ModelParams params_;
    long long steps_;
    std::map<CyclotomicPoint, BigInt> entries_;
    BigInt total_;
};

// Exact law of S_n by dynamic programming: n convolution steps, each
// spreading mass equally over the N directions. Throws resource_error when
// the state count would exceed the cap.
inline ExactDistribution enumerate_distribution(const ModelParams& params,
                                                long long steps,
                                                std::size_t state_cap = kDefaultStateCap) {
    if (steps < 0)
        throw std::invalid_argument("enumerate_distribution: steps must be >= 0");
    std::vector<CyclotomicPoint> dirs;
    for (int k = 0; k < params.order; ++k)
        dirs.push_back(CyclotomicPoint::direction(params.order, k));

    std::map<CyclotomicPoint, BigInt> current;
    current.emplace(CyclotomicPoint::zero(params.order), BigInt(1));
    for (long long s = 0; s < steps; ++s) {
        std::map<CyclotomicPoint, BigInt> next;
        for (const auto& [point, count] : current)
            for (const CyclotomicPoint& d : dirs) next[point + d] += count;
        if (next.size() > state_cap)
            throw resource_error(
                "enumerate_distribution: state count " + std::to_string(next.size()) +
                " exceeds cap " + std::to_string(state_cap));
        current = std::move(next);
    }
    return ExactDistribution(params, steps, std::move(current));
}

// P(S_{Nm} = 0) = (Nm)! / ((m!)^N N^{Nm}) for prime N, where a return
// forces the same number of steps in every direction. For composite N the
// direction exponents satisfy extra relations and enumeration is the oracle.
inline BigRational return_probability_closed(const ModelParams& params, long long m) {
    if (!is_prime(params.order))
        throw unsupported_error(
            "return_probability_closed: closed form requires prime order; use "
            "enumerate_distribution for composite orders");
    if (m < 1)
        throw std::invalid_argument("return_probability_closed: m must be >= 1");
    const long long N = params.order;
    BigInt num = factorial_big(N * m);
    BigInt den = bigint_pow(factorial_big(m), static_cast<unsigned long long>(N)) *
                 bigint_pow(BigInt(N), static_cast<unsigned long long>(N * m));
    return BigRational(num, den);
}

// Stirling approximation sqrt(2 pi N m) (2 pi m)^{-N/2} of the closed form.
inline double return_asymptote(const ModelParams& params, long long m) {
    if (!is_prime(params.order))
        throw unsupported_error("return_asymptote: requires prime order");
    const double N = static_cast<double>(params.order);
    const double md = static_cast<double>(m);
    return std::sqrt(2.0 * kPi * N * md) * std::pow(2.0 * kPi * md, -N / 2.0);
}

struct RecurrenceReport {
    std::vector<long long> m_values;
    std::vector<BigRational> exact_probabilities;  // P(S_{Nm} = 0), exact
    std::vector<double> return_probabilities;      // same, as doubles
    std::vector<double> partial_sums;
    double decay_exponent = 0.0;  // log-log slope of P vs m
    double fit_residual = 0.0;
    bool used_enumeration = false;
};

// Partial sums of return probabilities and the fitted decay exponent.
// Prime orders use the closed form; composite orders walk the exact
// enumeration forward and read off the mass at the origin.
inline RecurrenceReport recurrence_diagnostic(const ModelParams& params,
                                              long long m_max,
                                              std::size_t state_cap = kDefaultStateCap) {
    if (m_max < 10)
        throw std::invalid_argument("recurrence_diagnostic: m_max must be >= 10");
    RecurrenceReport report;
    double acc = 0.0;
    if (is_prime(params.order)) {
        for (long long m = 1; m <= m_max; ++m) {
            const BigRational exact = return_probability_closed(params, m);
            const double p = to_double(exact);
            report.m_values.push_back(m);
            report.exact_probabilities.push_back(exact);
            report.return_probabilities.push_back(p);
            acc += p;
            report.partial_sums.push_back(acc);
        }
    } else {
        report.used_enumeration = true;
        std::vector<CyclotomicPoint> dirs;
        for (int k = 0; k < params.order; ++k)
            dirs.push_back(CyclotomicPoint::direction(params.order, k));
        const CyclotomicPoint origin = CyclotomicPoint::zero(params.order);
        std::map<CyclotomicPoint, BigInt> current;
        current.emplace(origin, BigInt(1));
        BigInt total = 1;
        for (long long m = 1; m <= m_max; ++m) {
            for (int s = 0; s < params.order; ++s) {
                std::map<CyclotomicPoint, BigInt> next;
                for (const auto& [point, count] : current)
                    for (const CyclotomicPoint& d : dirs) next[point + d] += count;
                if (next.size() > state_cap)
                    throw resource_error(
                        "recurrence_diagnostic: state count exceeds cap " +
                        std::to_string(state_cap));
                current = std::move(next);
                total *= params.order;
            }
            auto it = current.find(origin);
            const BigRational exact = (it == current.end())
                                          ? BigRational(0)
                                          : BigRational(it->second, total);
            const double p = to_double(exact);
            report.m_values.push_back(m);
            report.exact_probabilities.push_back(exact);
            report.return_probabilities.push_back(p);
            acc += p;
            report.partial_sums.push_back(acc);
        }
    }
    std::vector<double> ms(report.m_values.begin(), report.m_values.end());
    const LinearFit fit = log_log_fit(ms, report.return_probabilities);
    report.decay_exponent = fit.slope;
    report.fit_residual = fit.residual_rms;
    return report;
}

struct NeighborhoodReport {
    double epsilon = 0.0;
    long long n_max = 0;
    long long replicas = 0;
    std::vector<long long> checkpoints;       // n values where stats are recorded
    std::vector<double> mean_visit_counts;    // estimates of sum_{k<=n} P(|S_k| <= eps)
    std::vector<double> gaussian_limit_curve; // n (1 - exp(-eps^2 / (|alpha|^{2/N} n)))
    double log_fit_coefficient = 0.0;         // c in visits ~ a + c log n (tail fit)
    double gaussian_limit_value = 0.0;        // eps^2 target of the limit curve
};

// Monte Carlo visit statistics for the ball B(0, eps): estimates the
// expected number of visits up to n (equivalently the partial sums of
// P(|S_n| <= eps)), which grows like (eps^2 / |alpha|^{2/N}) log n.
inline NeighborhoodReport neighborhood_visit_stats(const ModelParams& params,
                                                   double epsilon, long long n_max,
                                                   long long replicas,
                                                   std::uint64_t seed) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("neighborhood_visit_stats: epsilon must be > 0");
    if (n_max < 1 || replicas < 1)
        throw std::invalid_argument("neighborhood_visit_stats: n_max and replicas >= 1");
    const StepDistribution step(params);

    NeighborhoodReport report;
    report.epsilon = epsilon;
    report.n_max = n_max;
    report.replicas = replicas;
    for (long long n = 1; n <= n_max; n *= 2) report.checkpoints.push_back(n);
    if (report.checkpoints.back() != n_max) report.checkpoints.push_back(n_max);

    std::vector<double> sums(report.checkpoints.size(), 0.0);
    for (long long r = 0; r < replicas; ++r) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
        Complex pos{0.0, 0.0};
        long long visits = 0;
        std::size_t ci = 0;
        for (long long n = 1; n <= n_max; ++n) {
            pos += step.sample(rng).value;
            if (std::abs(pos) <= epsilon) ++visits;
            if (ci < report.checkpoints.size() && n == report.checkpoints[ci]) {
                sums[ci] += static_cast<double>(visits);
                ++ci;
            }
        }
    }
    for (std::size_t i = 0; i < sums.size(); ++i)
        report.mean_visit_counts.push_back(sums[i] / static_cast<double>(replicas));

    // n |alpha|^{2/N} [1 - exp(-eps^2 / (|alpha|^{2/N} n))] -> eps^2.
    const double a2 = std::pow(std::abs(params.alpha), 2.0 / params.order);
    for (long long n : report.checkpoints) {
        const double nd = static_cast<double>(n);
        report.gaussian_limit_curve.push_back(
            nd * a2 * (1.0 - std::exp(-epsilon * epsilon / (a2 * nd))));
    }
    report.gaussian_limit_value = epsilon * epsilon;

    // Fit visits ~ a + c log n over the checkpoints past the diffusive
    // transient (n >= 100 when available).
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
        if (report.checkpoints[i] < 100 && report.checkpoints.size() > 3) continue;
        lx.push_back(std::log(static_cast<double>(report.checkpoints[i])));
        ly.push_back(report.mean_visit_counts[i]);
    }
    if (lx.size() >= 2) report.log_fit_coefficient = linear_fit(lx, ly).slope;
    return report;
}

struct EscapeEstimate {
    double estimate = 0.0;    // MC estimate of P(|S~_n| > eps)
    double std_error = 0.0;
    double comparator = 0.0;  // exp(-eps^2 |alpha|^{-2/N} n^{2/N - 1})
};

inline EscapeEstimate escape_probability(const ModelParams& params, long long n,
                                         double epsilon, long long replicas,
                                         std::uint64_t seed) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("escape_probability: epsilon must be > 0");
    if (n < 1 || replicas < 1)
        throw std::invalid_argument("escape_probability: n and replicas >= 1");
    const StepDistribution step(params);
    const double scale = std::pow(static_cast<double>(n), -1.0 / params.order);
    long long hits = 0;
    for (long long r = 0; r < replicas; ++r) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
        Complex pos{0.0, 0.0};
        for (long long k = 0; k < n; ++k) pos += step.sample(rng).value;
        if (std::abs(pos) * scale > epsilon) ++hits;
    }
    EscapeEstimate est;
    est.estimate = static_cast<double>(hits) / static_cast<double>(replicas);
    est.std_error = std::sqrt(std::max(est.estimate * (1.0 - est.estimate), 0.0) /
                              static_cast<double>(replicas));
    const double a2 = std::pow(std::abs(params.alpha), 2.0 / params.order);
    est.comparator = std::exp(-epsilon * epsilon / a2 *
                              std::pow(static_cast<double>(n),
                                       2.0 / params.order - 1.0));
    return est;
}

/**
 * An element of the dihedral symmetry group of the direction set R(N):
 * zeta^k -> zeta^{rotation + k} (rotation), or zeta^k -> zeta^{rotation - k}
 * (reflection, i.e. conjugation followed by a rotation).
 */
struct LatticeSymmetry {
    int order = 0;
    int rotation = 0;
    bool reflect = false;

    LatticeSymmetry(int order_, int rotation_, bool reflect_)
        : order(order_), rotation(rotation_), reflect(reflect_) {
        if (rotation < 0 || rotation >= order)
            throw invalid_symmetry_error("LatticeSymmetry: rotation must lie in [0, N)");
    }

    // Classify a planar linear map as a dihedral element of R(N); throws
    // invalid_symmetry_error if the map does not permute R(N).
    static LatticeSymmetry from_matrix(int order, const Mat2& map,
                                       double tol = 1e-12) {
        auto apply = [&map](Complex z) {
            return Complex{map.xx * z.real() + map.xy * z.imag(),
                           map.yx * z.real() + map.yy * z.imag()};
        };
        auto nearest_root = [order, tol](Complex z) {
            for (int k = 0; k < order; ++k)
                if (std::abs(z - std::polar(1.0, 2.0 * kPi * k / order)) <= tol)
                    return k;
            throw invalid_symmetry_error(
                "LatticeSymmetry: map does not preserve R(N)");
        };
        std::vector<bool> hit(order, false);
        std::vector<int> image(order, 0);
        for (int k = 0; k < order; ++k) {
            const int j = nearest_root(apply(std::polar(1.0, 2.0 * kPi * k / order)));
            if (hit[j])
                throw invalid_symmetry_error(
                    "LatticeSymmetry: map is not injective on R(N)");
            hit[j] = true;
            image[k] = j;
        }
        const int r = image[0];
        // For N = 2 rotation and reflection act identically on R(N).
        const bool refl =
            order > 2 && image[1] == ((r - 1) % order + order) % order;
        return LatticeSymmetry(order, r, refl);
    }

    int image_of_root(int k) const {
        const int j = reflect ? rotation - k : rotation + k;
        return ((j % order) + order) % order;
    }

    CyclotomicPoint apply(const CyclotomicPoint& p) const {
        std::vector<std::int64_t> raw(order, 0);
        const auto& coeffs = p.coeffs();
        for (std::size_t d = 0; d < coeffs.size(); ++d) {
            if (coeffs[d] == 0) continue;
            raw[image_of_root(static_cast<int>(d))] += coeffs[d];
        }
        return CyclotomicPoint::from_raw(order, std::move(raw));
    }
};

// Pushforward of an exact law under a dihedral symmetry. By exchangeability
// of the steps this must reproduce the law entry-by-entry.
inline ExactDistribution apply_lattice_symmetry(const ExactDistribution& dist,
                                                const LatticeSymmetry& sym) {
    if (sym.order != dist.params().order)
        throw invalid_symmetry_error("apply_lattice_symmetry: order mismatch");
    std::map<CyclotomicPoint, BigInt> pushed;
    for (const auto& [point, count] : dist.entries()) pushed[sym.apply(point)] += count;
    return ExactDistribution(dist.params(), dist.steps(), std::move(pushed));
}

/**
 * Law descriptor of W_n(t). For t >= 0 the law equals n^{-1/N} S_{floor(nt)};
 * for t < 0 it is e^{i pi/N} times the law at |t| (floor(-t) = -floor(t)
 * convention).
 */
struct WalkProcessLaw {
    ModelParams params;
    long long n = 1;
    double t = 0.0;

    long long steps() const { return floor_steps(n, t); }
    double scale() const { return std::pow(static_cast<double>(n), -1.0 / params.order); }
    Complex rotation() const {
        return t < 0.0 ? std::polar(1.0, kPi / params.order) : Complex{1.0, 0.0};
    }
};

// One draw of W_n(t); the negative-time value is an independent walk rotated
// by e^{i pi/N}.
inline Complex sample_W(const ModelParams& params, long long n, double t, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_W: n must be >= 1");
    const StepDistribution step(params);
    const long long steps = floor_steps(n, t);
    Complex pos{0.0, 0.0};
    for (long long k = 0; k < steps; ++k) pos += step.sample(rng).value;
    pos *= std::pow(static_cast<double>(n), -1.0 / params.order);
    if (t < 0.0) pos *= std::polar(1.0, kPi / params.order);
    return pos;
}

/**
 * A sampled path of W_n over a time grid. Values at grid points within the
 * same sign share the underlying step sequence, so increments are consistent
 * with the piecewise-constant construction; positive and negative time use
 * independent step streams.
 */
struct PathSample {
    ModelParams params;
    long long n = 1;
    std::vector<double> times;
    std::vector<Complex> values;
    std::vector<int> direction_log;  // directions consumed, positive side first
    std::uint64_t seed = 0;
};

inline PathSample sample_W_path(const ModelParams& params, long long n,
                                std::vector<double> times, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_W_path: n must be >= 1");
    if (!std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("sample_W_path: time grid must be increasing");
    const StepDistribution step(params);
    const double scale = std::pow(static_cast<double>(n), -1.0 / params.order);

    PathSample path{params, n, std::move(times), {}, {}, seed};
    const std::vector<double>& grid = path.times;
    path.values.resize(grid.size());

    // Positive side: one stream, cumulative steps up to floor(n t).
    {
        Rng rng = Rng::substream(seed, 0);
        Complex pos{0.0, 0.0};
        long long done = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] < 0.0) continue;
            const long long want = floor_steps(n, grid[i]);
            while (done < want) {
                const auto s = step.sample(rng);
                pos += s.value;
                path.direction_log.push_back(s.direction);
                ++done;
            }
            path.values[i] = pos * scale;
        }
    }
    // Negative side: independent stream, rotated by e^{i pi / N}; walk
    // outward from 0 in |t|.
    {
        Rng rng = Rng::substream(seed, 1);
        const Complex rot = std::polar(1.0, kPi / params.order);
        Complex pos{0.0, 0.0};
        long long done = 0;
        for (std::size_t i = grid.size(); i-- > 0;) {
            if (grid[i] >= 0.0) continue;
            const long long want = floor_steps(n, grid[i]);
            while (done < want) {
                const auto s = step.sample(rng);
                pos += s.value;
                path.direction_log.push_back(s.direction);
                ++done;
            }
            path.values[i] = rot * pos * scale;
        }
    }
    return path;
}

}  // namespace heatwalk
