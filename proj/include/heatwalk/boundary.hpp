#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "heatwalk/errors.hpp"
#include "heatwalk/model.hpp"
#include "heatwalk/solver.hpp"
#include "heatwalk/spectral.hpp"

namespace heatwalk {

enum class BoundaryKind {
    dirichlet_halfline,
    neumann_halfline,
    periodic,            // on [0, L]
    dirichlet_interval,  // on [0, L]
    neumann_interval,    // on [0, L]
};

inline std::string to_string(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::dirichlet_halfline: return "dirichlet-halfline";
        case BoundaryKind::neumann_halfline: return "neumann-halfline";
        case BoundaryKind::periodic: return "periodic";
        case BoundaryKind::dirichlet_interval: return "dirichlet";
        case BoundaryKind::neumann_interval: return "neumann";
    }
    throw std::logic_error("to_string(BoundaryKind)");
}

inline BoundaryKind boundary_kind_from_string(const std::string& s) {
    if (s == "dirichlet-halfline") return BoundaryKind::dirichlet_halfline;
    if (s == "neumann-halfline") return BoundaryKind::neumann_halfline;
    if (s == "periodic") return BoundaryKind::periodic;
    if (s == "dirichlet") return BoundaryKind::dirichlet_interval;
    if (s == "neumann") return BoundaryKind::neumann_interval;
    throw std::invalid_argument("unknown boundary kind: " + s);
}

inline bool boundary_kind_needs_length(BoundaryKind kind) {
    return kind == BoundaryKind::periodic ||
           kind == BoundaryKind::dirichlet_interval ||
           kind == BoundaryKind::neumann_interval;
}

/**
 * A whole-line datum carrying a boundary-condition tag. Dirichlet data are
 * odd measures ((y, c) paired with (-y, -c), nothing at y = 0), Neumann
 * data even; interval problems additionally live on the frequency lattice
 * (pi/L) Z (Fourier lattice (2 pi/L) Z for the periodic problem).
 */
struct BoundaryDatum {
    Datum base;
    BoundaryKind bc = BoundaryKind::periodic;
    double L = 0.0;  // interval length where applicable
};

namespace detail {

inline constexpr double kFrequencyTol = 1e-12;  // absolute, data built exactly
inline constexpr double kPairingTol = 1e-12;    // relative on weights

inline const Atom* find_frequency(const std::vector<Atom>& atoms, double y) {
    for (const Atom& a : atoms)
        if (std::abs(a.y - y) <= kFrequencyTol) return &a;
    return nullptr;
}

inline void check_parity(const std::vector<Atom>& atoms, bool odd,
                         const std::string& what) {
    for (const Atom& a : atoms) {
        if (odd && std::abs(a.y) <= kFrequencyTol)
            throw std::invalid_argument(what + ": odd measure cannot carry y = 0");
        const Atom* partner = find_frequency(atoms, -a.y);
        const Complex want = odd ? -a.c : a.c;
        const Complex got = partner ? partner->c : Complex{0.0, 0.0};
        if (std::abs(got - want) > kPairingTol * std::max(1.0, std::abs(a.c)))
            throw std::invalid_argument(what + ": measure is not " +
                                        (odd ? "odd" : "even"));
    }
}

inline void check_lattice(const std::vector<Atom>& atoms, double spacing,
                          const std::string& what) {
    for (const Atom& a : atoms) {
        const double q = a.y / spacing;
        if (std::abs(q - std::round(q)) * spacing > kFrequencyTol)
            throw std::invalid_argument(what +
                                        ": frequency off the boundary lattice");
    }
}

}  // namespace detail

// Validates the parity/lattice invariants of the tagged datum; throws
// std::invalid_argument on violation.
inline BoundaryDatum make_boundary_datum(Datum base, BoundaryKind bc, double L = 0.0) {
    if (boundary_kind_needs_length(bc) && !(L > 0.0))
        throw std::invalid_argument("make_boundary_datum: L must be > 0");
    const auto& atoms = base.measure.atoms();
    const std::string what = "make_boundary_datum(" + to_string(bc) + ")";
    switch (bc) {
        case BoundaryKind::dirichlet_halfline:
            detail::check_parity(atoms, true, what);
            break;
        case BoundaryKind::neumann_halfline:
            detail::check_parity(atoms, false, what);
            break;
        case BoundaryKind::periodic:
            detail::check_lattice(atoms, 2.0 * kPi / L, what);
            break;
        case BoundaryKind::dirichlet_interval:
            detail::check_parity(atoms, true, what);
            detail::check_lattice(atoms, kPi / L, what);
            break;
        case BoundaryKind::neumann_interval:
            detail::check_parity(atoms, false, what);
            detail::check_lattice(atoms, kPi / L, what);
            break;
    }
    return BoundaryDatum{std::move(base), bc, L};
}

// f(x) = sum_k b_k sin(k pi x / L) as an odd atomic measure: atoms at
// +/- k pi / L with weights -/+ i b_k / 2. Coefficients are b_1 .. b_K.
inline BoundaryDatum sine_series(double L, const std::vector<double>& b) {
    if (!(L > 0.0)) throw std::invalid_argument("sine_series: L must be > 0");
    std::vector<Atom> atoms;
    for (std::size_t k = 1; k <= b.size(); ++k) {
        const double bk = b[k - 1];
        if (bk == 0.0) continue;
        const double y = static_cast<double>(k) * kPi / L;
        atoms.push_back(Atom{y, Complex{0.0, -bk / 2.0}});
        atoms.push_back(Atom{-y, Complex{0.0, bk / 2.0}});
    }
    return make_boundary_datum(Datum{AtomicMeasure(std::move(atoms))},
                               BoundaryKind::dirichlet_interval, L);
}

// f(x) = a_0 + sum_k a_k cos(k pi x / L) as an even atomic measure.
// Coefficients are a_0 .. a_K.
inline BoundaryDatum cosine_series(double L, const std::vector<double>& a) {
    if (!(L > 0.0)) throw std::invalid_argument("cosine_series: L must be > 0");
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double ak = a[k];
        if (ak == 0.0) continue;
        if (k == 0) {
            atoms.push_back(Atom{0.0, Complex{ak, 0.0}});
            continue;
        }
        const double y = static_cast<double>(k) * kPi / L;
        atoms.push_back(Atom{y, Complex{ak / 2.0, 0.0}});
        atoms.push_back(Atom{-y, Complex{ak / 2.0, 0.0}});
    }
    return make_boundary_datum(Datum{AtomicMeasure(std::move(atoms))},
                               BoundaryKind::neumann_interval, L);
}

enum class Parity { odd, even };

/**
 * A half-line restriction given as a sine or cosine series with arbitrary
 * positive frequencies: f(x) = sum c_k sin(y_k x) or c_0 + sum c_k cos(y_k x).
 */
struct HalfLineSeries {
    enum class Kind { sine, cosine };
    Kind kind = Kind::sine;
    std::vector<std::pair<double, double>> terms;  // (frequency y > 0, coefficient)
    double constant = 0.0;                         // cosine series only
};

// Whole-line odd/even extension of a half-line series. Sine data extend
// oddly, cosine data evenly; the opposite pairing leaves the admissible
// class and is rejected. Idempotent: the atoms built here restrict back to
// the input on x >= 0.
inline BoundaryDatum extend(const HalfLineSeries& series, Parity parity) {
    const bool odd = parity == Parity::odd;
    if (odd && series.kind != HalfLineSeries::Kind::sine)
        throw invalid_extension_error(
            "extend: odd extension requires sine coefficients");
    if (!odd && series.kind != HalfLineSeries::Kind::cosine)
        throw invalid_extension_error(
            "extend: even extension requires cosine coefficients");
    if (odd && series.constant != 0.0)
        throw invalid_extension_error("extend: odd extension cannot carry a constant");

    std::vector<Atom> atoms;
    if (!odd && series.constant != 0.0)
        atoms.push_back(Atom{0.0, Complex{series.constant, 0.0}});
    for (const auto& [y, coeff] : series.terms) {
        if (!(y > 0.0))
            throw std::invalid_argument("extend: frequencies must be positive");
        if (coeff == 0.0) continue;
        if (odd) {
            atoms.push_back(Atom{y, Complex{0.0, -coeff / 2.0}});
            atoms.push_back(Atom{-y, Complex{0.0, coeff / 2.0}});
        } else {
            atoms.push_back(Atom{y, Complex{coeff / 2.0, 0.0}});
            atoms.push_back(Atom{-y, Complex{coeff / 2.0, 0.0}});
        }
    }
    return make_boundary_datum(Datum{AtomicMeasure(std::move(atoms))},
                               odd ? BoundaryKind::dirichlet_halfline
                                   : BoundaryKind::neumann_halfline);
}

// True iff the generator preserves the subspace cut out by the boundary
// condition: always for periodic data; for Dirichlet/Neumann only when N is
// even (the multiplier i^N alpha y^N / N! is even in y exactly then).
inline bool closure_check(const ModelParams& params, const BoundaryDatum& bd) {
    if (bd.bc == BoundaryKind::periodic) return true;
    return params.order % 2 == 0;
}

// Solve the boundary problem by whole-line extension: delegates to the
// spectral or probabilistic solver on the extended datum. Throws
// unsupported_error when the generator does not close on the subspace
// (odd N with Dirichlet/Neumann).
inline SolveResult boundary_solve(const ModelParams& params, const BoundaryDatum& bd,
                                  double t, const std::vector<double>& x_grid,
                                  SolveMethod method, long long n = 1,
                                  long long replicas = 1, std::uint64_t seed = 0,
                                  int workers = 1) {
    if (!closure_check(params, bd))
        throw unsupported_error(
            "boundary_solve: Dirichlet/Neumann problems require even order (the "
            "generator does not map the odd/even subspace into itself for odd N)");
    SolveRequest req{params, bd.base, t, 0.0, x_grid, n, method, replicas, seed,
                     workers};
    return solve(req);
}

}  // namespace heatwalk
