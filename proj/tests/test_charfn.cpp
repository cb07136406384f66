#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "heatwalk/charfn.hpp"
#include "heatwalk/rng.hpp"
#include "heatwalk/walk.hpp"

using namespace heatwalk;

namespace {

const ModelParams kP3{3, {1.0, 0.0}};
const ModelParams kP4{4, {1.0, 0.0}};
const ModelParams kP4m{4, {-1.0, 0.0}};

// E[e^{i lambda S~_n}] from the exact law (oracle for char_S_scaled).
Complex char_from_enumeration(const ModelParams& params, long long n, Complex lambda) {
    const auto dist = enumerate_distribution(params, n);
    const double scale = std::pow(static_cast<double>(n), -1.0 / params.order);
    const double total = to_double(dist.total());
    Complex acc{0.0, 0.0};
    for (const auto& [point, count] : dist.entries())
        acc += std::exp(Complex{0.0, 1.0} * lambda *
                        point.to_complex(params, scale)) *
               (to_double(count) / total);
    return acc;
}

}  // namespace

TEST_CASE("char_S_scaled basics and enumeration oracle") {
    CHECK(char_S_scaled(kP3, 7, {0.0, 0.0}) == Complex{1.0, 0.0});

    for (const ModelParams& params :
         {kP3, kP4, ModelParams{5, {-1.0, 0.5}}}) {
        for (long long n : {2, 5, 8}) {
            for (const Complex lam :
                 {Complex{0.5, 0.0}, Complex{1.0, 0.0}, Complex{1.3, -0.2}}) {
                const Complex via_power = char_S_scaled(params, n, lam);
                const Complex via_enum = char_from_enumeration(params, n, lam);
                CHECK(std::abs(via_power - via_enum) < 1e-10);
            }
        }
    }

    // Theorem-4 scale: |psi_n(1) - e^{-i/6}| <= 2 * 0.0125 / n at n = 10^4.
    const Complex limit = std::exp(Complex{0.0, -1.0 / 6.0});
    CHECK(std::abs(char_S_scaled(kP3, 10'000, {1.0, 0.0}) - limit) <=
          2.0 * 0.0125 / 1e4);

    CHECK_THROWS_AS(char_S_scaled(kP3, 0, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(char_S_scaled(kP3, 4, Complex{0.0, 2000.0}), std::range_error);
}

TEST_CASE("char_W clock and negative-time rotation") {
    CHECK(char_W(kP4, 9, 0.0, {1.2, 0.0}) == Complex{1.0, 0.0});
    CHECK(char_W(kP4, 9, 0.05, {1.2, 0.0}) == Complex{1.0, 0.0});  // zero steps

    // t = 1 equals the normalized-walk characteristic function.
    for (const Complex lam : {Complex{0.7, 0.0}, Complex{1.0, 0.4}})
        CHECK(char_W(kP3, 12, 1.0, lam) == char_S_scaled(kP3, 12, lam));

    // t < 0 equals t > 0 with lambda rotated by e^{i pi / N}.
    const Complex rot = std::polar(1.0, kPi / 3.0);
    for (double t : {-0.4, -1.0, -2.7})
        for (const Complex lam : {Complex{0.9, 0.0}, Complex{0.3, 0.2}})
            CHECK(std::abs(char_W(kP3, 11, t, lam) -
                           char_W(kP3, 11, -t, lam * rot)) < 1e-15);

    // N = 3, alpha = 1, lambda = 1, t = -1: the limit is exp(+i/6).
    const Complex target = std::exp(Complex{0.0, 1.0 / 6.0});
    CHECK(std::abs(char_W(kP3, 100'000, -1.0, {1.0, 0.0}) - target) < 1e-4);
}

TEST_CASE("limit characteristic function") {
    CHECK(limit_char(kP3, 0.7, {0.0, 0.0}) == Complex{1.0, 0.0});

    // N = 2 recovers the Gaussian.
    const ModelParams p2{2, {1.0, 0.0}};
    for (double lam : {0.3, 1.0, 2.1})
        CHECK(std::abs(limit_char(p2, 1.0, {lam, 0.0}) -
                       Complex{std::exp(-lam * lam / 2.0), 0.0}) < 1e-15);

    // N = 4, alpha = -1, t = 1, lambda = 1 -> exp(-1/24).
    CHECK(std::abs(limit_char(kP4m, 1.0, {1.0, 0.0}) -
                   Complex{std::exp(-1.0 / 24.0), 0.0}) < 1e-15);

    // The exponent flips sign in t exactly under lambda -> lambda e^{i pi/N}.
    const Complex rot = std::polar(1.0, kPi / 4.0);
    for (const Complex lam : {Complex{1.0, 0.0}, Complex{0.4, 0.3}})
        CHECK(std::abs(limit_char(kP4m, -1.3, lam) -
                       limit_char(kP4m, 1.3, lam * rot)) < 1e-12);
}

TEST_CASE("CLT error constant") {
    CHECK(clt_error_constant(kP3, {0.0, 0.0}) == Complex{0.0, 0.0});
    CHECK(std::abs(std::abs(clt_error_constant(kP3, {1.0, 0.0})) - 0.0125) < 1e-15);

    // n (psi_n - limit) converges to the constant: within 2% at n = 10^5.
    const long long n = 100'000;
    const Complex diff =
        static_cast<double>(n) *
        (char_S_scaled(kP3, n, {1.0, 0.0}) - limit_char(kP3, 1.0, {1.0, 0.0}));
    const Complex constant = clt_error_constant(kP3, {1.0, 0.0});
    CHECK(std::abs(diff - constant) <= 0.02 * std::abs(constant));

    const Complex diff4 =
        static_cast<double>(n) *
        (char_S_scaled(kP4m, n, {1.0, 0.0}) - limit_char(kP4m, 1.0, {1.0, 0.0}));
    const Complex constant4 = clt_error_constant(kP4m, {1.0, 0.0});
    CHECK(std::abs(diff4 - constant4) <= 0.02 * std::abs(constant4));

    // Pointwise over a lambda grid.
    for (double lam : {0.5, 1.0, 1.5}) {
        const Complex lambda{lam, 0.0};
        const Complex scaled_diff =
            static_cast<double>(n) *
            (char_S_scaled(kP3, n, lambda) - limit_char(kP3, 1.0, lambda));
        const Complex constant = clt_error_constant(kP3, lambda);
        CHECK(std::abs(scaled_diff - constant) <= 0.02 * std::abs(constant));
    }
}

TEST_CASE("error decomposition") {
    // Integer t: the clock term vanishes identically.
    for (double t : {1.0, 2.0, -1.0})
        CHECK(error_decomposition(kP3, 1000, t, {0.8, 0.0}).g_n == Complex{0.0, 0.0});

    // |g_n| <= g_bound over a random parameter sweep.
    Rng rng(20240905u);
    for (int rep = 0; rep < 1000; ++rep) {
        const long long n = 1 + static_cast<long long>(rng.bounded(5000));
        const double t = (rng.uniform01() - 0.5) * 6.0;
        const Complex lam{rng.uniform01() * 2.0, (rng.uniform01() - 0.5) * 0.4};
        const ModelParams& params = (rep % 2 == 0) ? kP3 : kP4m;
        const auto dec = error_decomposition(params, n, t, lam);
        CHECK(std::abs(dec.g_n) <= dec.g_bound * (1.0 + 1e-12));
    }

    // n f_n approaches t B exp(i^N alpha lambda^N t / N!) with
    // B = (1/(2N)! - 1/(2 (N!)^2)) (i lambda)^{2N} alpha^2.
    const double t = 0.7;
    const Complex lam{1.0, 0.0};
    const long long n = 100'000;
    const auto dec = error_decomposition(kP3, n, t, lam);
    const Complex expected = t * clt_error_constant(kP3, lam) /
                             limit_char(kP3, 1.0, lam) * limit_char(kP3, t, lam);
    CHECK(std::abs(static_cast<double>(n) * dec.f_n - expected) <=
          0.05 * std::abs(expected));

    // The decomposition is exact: f_n + g_n reproduces the difference.
    const auto d2 = error_decomposition(kP4m, 321, 1.7, {0.6, 0.1});
    const Complex direct =
        char_W(kP4m, 321, 1.7, {0.6, 0.1}) - limit_char(kP4m, 1.7, {0.6, 0.1});
    CHECK(std::abs(d2.f_n + d2.g_n - direct) < 1e-15);
}

TEST_CASE("corollary bound K") {
    CHECK(error_bound_K(kP3, 1.0, {0.0, 0.0}) == 0.0);
    CHECK(std::abs(error_bound_K(kP3, 1.0, {1.0, 0.0}) -
                   (1.0 / 6.0 + 1.0 / 80.0)) < 1e-15);

    // |char_W - limit| <= 1.1 K / n for all n past a small threshold.
    for (const ModelParams& params : {kP3, kP4m}) {
        for (double t : {0.5, 1.0, -1.3}) {
            for (const Complex lam : {Complex{0.5, 0.0}, Complex{1.0, 0.0}}) {
                const double K = error_bound_K(params, t, lam);
                const Complex limit = limit_char(params, t, lam);
                long long threshold = -1;
                for (long long n = 1; n <= 3000; ++n) {
                    const double err = std::abs(char_W(params, n, t, lam) - limit);
                    if (err > 1.1 * K / static_cast<double>(n))
                        threshold = n;
                }
                // Bound holds for every n beyond the last violation; demand
                // the violations stop early.
                CHECK(threshold < 50);
            }
        }
    }
}

TEST_CASE("Faa di Bruno moments") {
    // k not a multiple of N vanishes.
    CHECK(moment_faadibruno(kP3, 9, 4) == Complex{0.0, 0.0});
    CHECK(moment_faadibruno(kP4, 9, 6) == Complex{0.0, 0.0});

    // k = N gives alpha exactly for every n > N.
    for (const ModelParams& params :
         {kP3, kP4m, ModelParams{5, {0.25, -1.5}}}) {
        for (long long n = params.order + 1; n <= 20; ++n)
            CHECK(moment_faadibruno(params, n, params.order) == params.alpha);
    }

    // N = 3, alpha = 1, n = 10, k = 6: (2N)!/(2 (N!)^2) (n-1)/n + 1/n = 9.1.
    CHECK(std::abs(moment_faadibruno(kP3, 10, 6) - Complex{9.1, 0.0}) < 1e-12);

    CHECK_THROWS_AS(moment_faadibruno(kP3, 6, 6), std::invalid_argument);
    CHECK_THROWS_AS(moment_faadibruno(kP3, 3, 0), std::invalid_argument);
}

TEST_CASE("Faa di Bruno equals enumeration moments") {
    for (const ModelParams& params : {ModelParams{3, {1.0, 0.0}},
                                      ModelParams{4, {0.0, 1.0}},
                                      ModelParams{5, {-1.0, 0.5}}}) {
        const int N = params.order;
        for (long long n = 2; n <= 8; ++n) {
            const auto dist = enumerate_distribution(params, n);
            const double scale = std::pow(static_cast<double>(n), -1.0 / N);
            for (long long k = 1; k <= 2 * N && k < n; ++k) {
                const Complex via_fdb = moment_faadibruno(params, n, k);
                const Complex via_enum = dist.moment(k, scale);
                CHECK(std::abs(via_fdb - via_enum) <=
                      1e-9 * std::max(1.0, std::abs(via_fdb)));
            }
        }
    }
}

TEST_CASE("limit moments") {
    for (const ModelParams& params : {kP3, kP4m})
        CHECK(std::abs(moment_limit(params, params.order) - params.alpha) < 1e-15);
    CHECK(std::abs(moment_limit(ModelParams{2, {1.0, 0.0}}, 4) - Complex{3.0, 0.0}) <
          1e-15);
    CHECK(moment_limit(kP3, 5) == Complex{0.0, 0.0});
    CHECK(moment_limit(kP3, 0) == Complex{1.0, 0.0});
}

TEST_CASE("finite-n moments approach the limit at rate 1/n") {
    for (const ModelParams& params : {kP3, kP4m}) {
        for (long long M : {2, 3}) {
            const long long k = M * params.order;
            std::vector<double> ns, diffs;
            for (long long n = 50; n <= 12'800; n *= 2) {
                ns.push_back(static_cast<double>(n));
                diffs.push_back(std::abs(moment_faadibruno(params, n, k) -
                                         moment_limit(params, k)));
            }
            const auto fit = log_log_fit(ns, diffs);
            CHECK(fit.slope > -1.15);
            CHECK(fit.slope < -0.85);
        }
    }
}
