#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>

#include "heatwalk/numeric.hpp"
#include "heatwalk/rng.hpp"
#include "heatwalk/step.hpp"

using namespace heatwalk;

namespace {

const std::array<Complex, 3> kAlphas = {Complex{1.0, 0.0}, Complex{0.0, 1.0},
                                        Complex{-1.0, 0.5}};

double tol_scale(const StepDistribution& d, long long m) {
    return std::max(1.0, d.abs_moment(m));
}

}  // namespace

TEST_CASE("step moments: closed form against the direct atom sum") {
    for (int order : {3, 4, 5}) {
        for (const Complex& alpha : kAlphas) {
            const StepDistribution d(ModelParams{order, alpha});
            for (long long m = 0; m <= 40; ++m) {
                const Complex closed = d.moment(m);
                const Complex direct = d.moment_direct(m);
                CHECK(std::abs(closed - direct) <= 1e-12 * tol_scale(d, m));
            }
        }
    }
}

TEST_CASE("step moment examples") {
    CHECK(StepDistribution(ModelParams{3, {1.0, 0.0}}).moment(3) == Complex{1.0, 0.0});
    CHECK(StepDistribution(ModelParams{3, {1.0, 0.0}}).moment(2) == Complex{0.0, 0.0});
    CHECK(std::abs(StepDistribution(ModelParams{4, {2.0, 0.0}}).moment(8) -
                   Complex{4.0, 0.0}) < 1e-15);
}

TEST_CASE("absolute moments") {
    CHECK(StepDistribution(ModelParams{3, {1.0, 0.0}}).abs_moment(7) == 1.0);
    CHECK(std::abs(StepDistribution(ModelParams{4, {16.0, 0.0}}).abs_moment(4) - 16.0) <
          1e-12);
    for (int order : {3, 4, 5})
        for (const Complex& alpha : kAlphas)
            CHECK(StepDistribution(ModelParams{order, alpha}).abs_moment(0) == 1.0);
}

TEST_CASE("characteristic function values") {
    for (int order : {3, 4, 5})
        for (const Complex& alpha : kAlphas)
            CHECK(StepDistribution(ModelParams{order, alpha}).char_fn({0.0, 0.0}) ==
                  Complex{1.0, 0.0});

    // N = 4, alpha = 1, lambda = 1: (cos 1 + cosh 1) / 2.
    const StepDistribution d4(ModelParams{4, {1.0, 0.0}});
    CHECK(std::abs(d4.char_fn({1.0, 0.0}) -
                   Complex{(std::cos(1.0) + std::cosh(1.0)) / 2.0, 0.0}) < 1e-12);
}

TEST_CASE("characteristic derivatives at zero match i^j moments") {
    // Central finite differences of psi_xi; the identity psi^(j)(0) = i^j E[xi^j].
    const StepDistribution d(ModelParams{3, {1.0, 0.0}});
    const double h = 1e-6;
    auto psi = [&d](double lam) { return d.char_fn({lam, 0.0}); };

    const Complex d1 = (psi(h) - psi(-h)) / (2.0 * h);
    CHECK(std::abs(d1 - imag_unit_pow(1) * d.moment(1)) < 1e-4);

    const Complex d2 = (psi(h) - 2.0 * psi(0.0) + psi(-h)) / (h * h);
    CHECK(std::abs(d2 - imag_unit_pow(2) * d.moment(2)) < 1e-3);

    const double h3 = 1e-3;  // third difference needs a larger step
    const Complex d3 = (psi(2 * h3) - 2.0 * psi(h3) + 2.0 * psi(-h3) - psi(-2 * h3)) /
                       (2.0 * h3 * h3 * h3);
    const Complex expected3 = imag_unit_pow(3) * d.moment(3);
    CHECK(std::abs(d3 - expected3) <= 1e-4 * std::abs(expected3) + 1e-5);
}

TEST_CASE("characteristic function is branch independent") {
    for (int order : {3, 4, 5}) {
        for (const Complex& alpha : kAlphas) {
            const StepDistribution d(ModelParams{order, alpha});
            for (int branch = 1; branch < order; ++branch) {
                const Complex alt_root =
                    d.root() * std::polar(1.0, 2.0 * kPi * branch / order);
                for (const Complex lam :
                     {Complex{0.7, 0.0}, Complex{1.3, -0.4}, Complex{-2.0, 0.1}}) {
                    Complex acc{0.0, 0.0};
                    for (int k = 0; k < order; ++k)
                        acc += std::exp(Complex{0.0, 1.0} * lam * alt_root *
                                        std::polar(1.0, 2.0 * kPi * k / order));
                    acc /= static_cast<double>(order);
                    CHECK(std::abs(acc - d.char_fn(lam)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("atoms are centered with covariance |alpha|^{2/N}/2 I") {
    for (int order : {3, 4, 5, 6, 7}) {
        for (const Complex& alpha : kAlphas) {
            const StepDistribution d(ModelParams{order, alpha});
            Complex mean{0.0, 0.0};
            for (const Complex& a : d.atoms()) mean += a;
            CHECK(std::abs(mean) < 1e-12 * std::max(1.0, std::abs(d.root())));

            const Mat2 closed = d.covariance();
            const Mat2 planar = d.planar_second_moments();
            CHECK(std::abs(closed.xx - planar.xx) < 1e-12);
            CHECK(std::abs(closed.yy - planar.yy) < 1e-12);
            CHECK(std::abs(planar.xy) < 1e-12);
        }
    }

    const StepDistribution d4(ModelParams{4, {1.0, 0.0}});
    CHECK(d4.covariance().xx == 0.5);
    const StepDistribution d3(ModelParams{3, {64.0, 0.0}});
    CHECK(std::abs(d3.covariance().xx - 8.0) < 1e-12);
    const StepDistribution d5(ModelParams{5, {0.0, 1.0}});
    CHECK(std::abs(d5.covariance().xx - 0.5) < 1e-15);
}

TEST_CASE("sampling is uniform and reproducible") {
    const StepDistribution d(ModelParams{5, {1.0, 0.0}});

    // Fixed seed gives a deterministic sequence.
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const auto sa = d.sample(a);
        const auto sb = d.sample(b);
        REQUIRE(sa.direction == sb.direction);
        REQUIRE(sa.value == sb.value);
    }

    // 10^6 draws: each direction frequency within 3 sigma of 1/5.
    Rng rng(20240902u);
    const long long draws = 1'000'000;
    std::array<long long, 5> counts{};
    for (long long i = 0; i < draws; ++i) ++counts[d.sample(rng).direction];
    const double sigma = std::sqrt(0.2 * 0.8 / static_cast<double>(draws));
    for (int k = 0; k < 5; ++k) {
        const double freq = static_cast<double>(counts[k]) / draws;
        CHECK(std::abs(freq - 0.2) <= 3.0 * sigma);
    }

    // The sampled value always carries the direction's atom.
    Rng rng2(7u);
    for (int i = 0; i < 100; ++i) {
        const auto s = d.sample(rng2);
        CHECK(s.value == d.atoms()[s.direction]);
    }
}
