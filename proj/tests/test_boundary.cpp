#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "heatwalk/boundary.hpp"
#include "heatwalk/solver.hpp"

using namespace heatwalk;

namespace {

std::vector<double> uniform_grid(double lo, double hi, int count) {
    std::vector<double> grid;
    for (int i = 0; i < count; ++i)
        grid.push_back(lo + (hi - lo) * i / (count - 1));
    return grid;
}

}  // namespace

TEST_CASE("sine series build odd interval data") {
    const auto bd = sine_series(kPi, {1.0});
    CHECK(bd.bc == BoundaryKind::dirichlet_interval);
    REQUIRE(bd.base.measure.size() == 2);

    // f(0) = f(L) = 0, f(L/2) = 1.
    CHECK(std::abs(eval_datum(bd.base, {0.0, 0.0})) < 1e-15);
    CHECK(std::abs(eval_datum(bd.base, {kPi, 0.0})) < 1e-12);
    CHECK(std::abs(eval_datum(bd.base, {kPi / 2.0, 0.0}) - Complex{1.0, 0.0}) < 1e-15);

    // Pairing c_k + c_{-k} = 0.
    const auto& atoms = bd.base.measure.atoms();
    CHECK(atoms[0].y == -atoms[1].y);
    CHECK(std::abs(atoms[0].c + atoms[1].c) < 1e-15);

    // Reproduces sum b_k sin(k pi x / L) on a grid.
    const auto multi = sine_series(2.0, {0.5, 0.0, -1.25});
    for (double x : {0.1, 0.9, 1.7}) {
        const double expect = 0.5 * std::sin(kPi * x / 2.0) -
                              1.25 * std::sin(3.0 * kPi * x / 2.0);
        CHECK(std::abs(eval_datum(multi.base, {x, 0.0}) - Complex{expect, 0.0}) <
              1e-13);
    }
    CHECK_THROWS_AS(sine_series(-1.0, {1.0}), std::invalid_argument);
}

TEST_CASE("cosine series build even interval data") {
    const auto constant = cosine_series(kPi, {1.0});
    REQUIRE(constant.base.measure.size() == 1);
    CHECK(constant.base.measure.atoms()[0].y == 0.0);

    const auto bd = cosine_series(kPi, {0.0, 1.0});
    const ModelParams p{4, {-1.0, 0.0}};
    // f'(0) = f'(L) = 0 by spectral differentiation.
    CHECK(std::abs(spectral_derivative(p, bd.base, 0.0, 0.0, 1)) < 1e-15);
    CHECK(std::abs(spectral_derivative(p, bd.base, 0.0, kPi, 1)) < 1e-12);

    // Pairing c_k = c_{-k}.
    const auto& atoms = bd.base.measure.atoms();
    CHECK(atoms[0].y == -atoms[1].y);
    CHECK(std::abs(atoms[0].c - atoms[1].c) < 1e-15);
}

TEST_CASE("odd and even extensions of half-line series") {
    // sin(x) extended oddly is unchanged.
    HalfLineSeries sine{HalfLineSeries::Kind::sine, {{1.0, 1.0}}, 0.0};
    const auto odd = extend(sine, Parity::odd);
    CHECK(odd.bc == BoundaryKind::dirichlet_halfline);
    for (double x : {0.25, 1.5})
        CHECK(std::abs(eval_datum(odd.base, {x, 0.0}) - Complex{std::sin(x), 0.0}) <
              1e-15);
    // Restriction to x >= 0 reproduces the input; negative side mirrors.
    CHECK(std::abs(eval_datum(odd.base, {-1.5, 0.0}) + Complex{std::sin(1.5), 0.0}) <
          1e-15);

    // cos(x) extended evenly is unchanged.
    HalfLineSeries cosine{HalfLineSeries::Kind::cosine, {{1.0, 1.0}}, 0.0};
    const auto even = extend(cosine, Parity::even);
    CHECK(even.bc == BoundaryKind::neumann_halfline);
    for (double x : {0.25, -0.25, 2.0})
        CHECK(std::abs(eval_datum(even.base, {x, 0.0}) - Complex{std::cos(x), 0.0}) <
              1e-15);

    // Parity conflicts are rejected.
    CHECK_THROWS_AS(extend(sine, Parity::even), invalid_extension_error);
    CHECK_THROWS_AS(extend(cosine, Parity::odd), invalid_extension_error);
}

TEST_CASE("boundary datum invariants are validated") {
    // Odd measures cannot carry mass at zero frequency.
    CHECK_THROWS_AS(
        make_boundary_datum(Datum{AtomicMeasure({Atom{0.0, {1.0, 0.0}}})},
                            BoundaryKind::dirichlet_halfline),
        std::invalid_argument);
    // Unpaired weight.
    CHECK_THROWS_AS(
        make_boundary_datum(
            Datum{AtomicMeasure({Atom{1.0, {1.0, 0.0}}, Atom{-1.0, {0.5, 0.0}}})},
            BoundaryKind::dirichlet_halfline),
        std::invalid_argument);
    // Frequency off the periodic lattice.
    CHECK_THROWS_AS(
        make_boundary_datum(Datum{AtomicMeasure({Atom{1.1, {1.0, 0.0}}})},
                            BoundaryKind::periodic, 2.0 * kPi),
        std::invalid_argument);
    // Interval problems demand L > 0.
    CHECK_THROWS_AS(
        make_boundary_datum(Datum{AtomicMeasure({Atom{1.0, {1.0, 0.0}}})},
                            BoundaryKind::periodic),
        std::invalid_argument);

    // A valid periodic datum on L = 2 pi.
    CHECK_NOTHROW(make_boundary_datum(
        Datum{AtomicMeasure({Atom{1.0, {0.5, 0.0}}, Atom{-1.0, {0.5, 0.0}}})},
        BoundaryKind::periodic, 2.0 * kPi));
}

TEST_CASE("closure check") {
    const auto periodic = make_boundary_datum(
        Datum{AtomicMeasure({Atom{1.0, {0.5, 0.0}}, Atom{-1.0, {0.5, 0.0}}})},
        BoundaryKind::periodic, 2.0 * kPi);
    CHECK(closure_check(ModelParams{3, {1.0, 0.0}}, periodic));
    CHECK(closure_check(ModelParams{4, {-1.0, 0.0}}, periodic));

    const auto dirichlet = sine_series(kPi, {1.0});
    CHECK(closure_check(ModelParams{4, {-1.0, 0.0}}, dirichlet));
    CHECK_FALSE(closure_check(ModelParams{3, {1.0, 0.0}}, dirichlet));
    CHECK_FALSE(closure_check(ModelParams{5, {1.0, 0.0}}, dirichlet));
}

TEST_CASE("parity is preserved by the semigroup exactly when N is even") {
    const auto dirichlet = sine_series(kPi, {1.0, 0.0, 0.5});

    // Even N: the evolved measure still pairs (y, c) <-> (-y, -c).
    const ModelParams even{4, {-1.0, 0.0}};
    const Datum evolved = apply_semigroup(even, dirichlet.base, 1.7);
    CHECK_NOTHROW(make_boundary_datum(evolved, BoundaryKind::dirichlet_interval, kPi));

    // Odd N: the parity defect is nonzero and detected.
    const ModelParams odd{3, {1.0, 0.0}};
    const Datum skewed = apply_semigroup(odd, dirichlet.base, 1.7);
    CHECK_THROWS_AS(make_boundary_datum(skewed, BoundaryKind::dirichlet_interval, kPi),
                    std::invalid_argument);

    // Neumann side.
    const auto neumann = cosine_series(kPi, {0.3, 1.0});
    const Datum evolved_even = apply_semigroup(even, neumann.base, 0.9);
    CHECK_NOTHROW(
        make_boundary_datum(evolved_even, BoundaryKind::neumann_interval, kPi));
    const Datum evolved_odd = apply_semigroup(odd, neumann.base, 0.9);
    CHECK_THROWS_AS(
        make_boundary_datum(evolved_odd, BoundaryKind::neumann_interval, kPi),
        std::invalid_argument);
}

TEST_CASE("periodicity is preserved for every order") {
    const auto periodic = make_boundary_datum(
        Datum{AtomicMeasure({Atom{1.0, {0.5, 0.0}}, Atom{-1.0, {0.5, 0.0}},
                             Atom{2.0, {0.0, 0.25}}})},
        BoundaryKind::periodic, 2.0 * kPi);
    for (const ModelParams& p : {ModelParams{3, {1.0, 0.0}},
                                 ModelParams{4, {-1.0, 0.0}},
                                 ModelParams{5, {0.2, 0.1}}}) {
        const Datum evolved = apply_semigroup(p, periodic.base, 1.3);
        CHECK_NOTHROW(make_boundary_datum(evolved, BoundaryKind::periodic, 2.0 * kPi));
        // Frequencies are untouched by the multiplier.
        REQUIRE(evolved.measure.size() == periodic.base.measure.size());
        for (std::size_t i = 0; i < evolved.measure.size(); ++i)
            CHECK(evolved.measure.atoms()[i].y == periodic.base.measure.atoms()[i].y);
    }
}

TEST_CASE("Dirichlet problem on an interval") {
    const ModelParams p{4, {-1.0, 0.0}};
    const auto bd = sine_series(kPi, {1.0});
    const auto grid = uniform_grid(0.0, kPi, 21);
    for (double t : {0.5, 2.0}) {
        const auto result =
            boundary_solve(p, bd, t, grid, SolveMethod::spectral);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(result.values[i] -
                           Complex{std::exp(-t / 24.0) * std::sin(grid[i]), 0.0}) <
                  1e-12);
        // Boundary values vanish against the total-variation scale.
        CHECK(std::abs(result.values.front()) <= 1e-10 * seminorm(bd.base, 0));
        CHECK(std::abs(result.values.back()) <= 1e-10 * seminorm(bd.base, 0));
    }
}

TEST_CASE("Neumann problem on an interval") {
    const ModelParams p{4, {-1.0, 0.0}};
    const auto bd = cosine_series(kPi, {0.0, 1.0});
    double derivative_scale = 0.0;  // total variation of the derivative measure
    for (const Atom& a : bd.base.measure.atoms())
        derivative_scale += std::abs(a.c) * std::abs(a.y);
    for (double t : {0.5, 2.0}) {
        CHECK(std::abs(spectral_derivative(p, bd.base, t, 0.0, 1)) <=
              1e-10 * derivative_scale);
        CHECK(std::abs(spectral_derivative(p, bd.base, t, kPi, 1)) <=
              1e-10 * derivative_scale);
        // u(t, x) = e^{-t/24} cos(x).
        const auto grid = uniform_grid(0.0, kPi, 9);
        const auto result = boundary_solve(p, bd, t, grid, SolveMethod::spectral);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(result.values[i] -
                           Complex{std::exp(-t / 24.0) * std::cos(grid[i]), 0.0}) <
                  1e-12);
    }
}

TEST_CASE("periodic problem carries the traveling cosine") {
    const ModelParams p{3, {1.0, 0.0}};
    const auto bd = make_boundary_datum(
        Datum{AtomicMeasure({Atom{1.0, {0.5, 0.0}}, Atom{-1.0, {0.5, 0.0}}})},
        BoundaryKind::periodic, 2.0 * kPi);
    const auto grid = uniform_grid(0.0, 2.0 * kPi, 17);
    for (double t : {1.0, -1.0}) {
        const auto result = boundary_solve(p, bd, t, grid, SolveMethod::spectral);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(result.values[i] -
                           Complex{std::cos(grid[i] - t / 6.0), 0.0}) < 1e-12);
        // Periodicity: u(t, 0) = u(t, L).
        CHECK(std::abs(result.values.front() - result.values.back()) < 1e-12);
    }
}

TEST_CASE("odd-order Dirichlet and Neumann problems are refused") {
    const ModelParams p{3, {1.0, 0.0}};
    const auto bd = sine_series(kPi, {1.0});
    CHECK_THROWS_AS(boundary_solve(p, bd, 1.0, {0.5}, SolveMethod::spectral),
                    unsupported_error);
    const auto nb = cosine_series(kPi, {0.0, 1.0});
    CHECK_THROWS_AS(boundary_solve(ModelParams{5, {1.0, 0.0}}, nb, 1.0, {0.5},
                                   SolveMethod::walk_exact),
                    unsupported_error);
}

TEST_CASE("probabilistic boundary solve matches the spectral solution") {
    const ModelParams p{4, {-1.0, 0.0}};
    const auto bd = sine_series(kPi, {1.0});
    const auto grid = uniform_grid(0.0, kPi, 33);
    const std::vector<long long> ns{100, 1000, 10'000, 100'000};

    const auto oracle = boundary_solve(p, bd, 1.0, grid, SolveMethod::spectral);
    std::vector<double> errors;
    for (long long n : ns) {
        const auto approx =
            boundary_solve(p, bd, 1.0, grid, SolveMethod::walk_exact, n);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            sup = std::max(sup, std::abs(approx.values[i] - oracle.values[i]));
        errors.push_back(sup);
    }
    std::vector<double> nd(ns.begin(), ns.end());
    const auto fit = log_log_fit(nd, errors);
    CHECK(fit.slope > -1.2);
    CHECK(fit.slope < -0.8);

    // Dirichlet boundary value still vanishes along the probabilistic path:
    // the walk characteristic function is even in the frequency for even N.
    const auto walk = boundary_solve(p, bd, 1.0, grid, SolveMethod::walk_exact, 1000);
    CHECK(std::abs(walk.values.front()) <= 1e-10 * seminorm(bd.base, 0));
    CHECK(std::abs(walk.values.back()) <= 1e-10 * seminorm(bd.base, 0));
}
