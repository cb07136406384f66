#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "heatwalk/model.hpp"
#include "heatwalk/numeric.hpp"

namespace heatwalk {

struct Atom {
    double y = 0.0;  // real frequency
    Complex c;       // complex weight
};

/**
 * A finite atomic measure mu = sum_j c_j delta_{y_j}, representing the
 * initial datum f(x) = sum_j c_j e^{i x y_j}. Atoms are kept sorted by
 * frequency, duplicates merged by weight addition, zero weights dropped.
 *
 * Finite atomic measures satisfy the admissibility hypothesis for every
 * time, so the admissible window is the whole line.
 */
class AtomicMeasure {
public:
    AtomicMeasure() = default;

    explicit AtomicMeasure(std::vector<Atom> atoms) {
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.y < b.y; });
        for (const Atom& a : atoms) {
            if (!atoms_.empty() && atoms_.back().y == a.y)
                atoms_.back().c += a.c;
            else
                atoms_.push_back(a);
        }
        std::erase_if(atoms_, [](const Atom& a) { return a.c == Complex{0.0, 0.0}; });
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }

    AtomicMeasure operator-(const AtomicMeasure& other) const {
        std::vector<Atom> merged(atoms_);
        for (const Atom& a : other.atoms_) merged.push_back(Atom{a.y, -a.c});
        return AtomicMeasure(std::move(merged));
    }

    bool operator==(const AtomicMeasure& other) const {
        if (atoms_.size() != other.atoms_.size()) return false;
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (atoms_[i].y != other.atoms_[i].y || atoms_[i].c != other.atoms_[i].c)
                return false;
        return true;
    }

private:
    std::vector<Atom> atoms_;
};

struct Datum {
    AtomicMeasure measure;
};

// Entire extension f(z) = sum_j c_j exp(i z y_j); the Monte Carlo solver
// evaluates it at complex walk positions.
inline Complex eval_datum(const Datum& d, Complex z) {
    Complex acc{0.0, 0.0};
    const Complex iz = Complex{0.0, 1.0} * z;
    for (const Atom& a : d.measure.atoms()) acc += a.c * std::exp(iz * a.y);
    return acc;
}

// ||f||_n = sum_j |c_j| e^{n |y_j|}; nondecreasing in n, ||f||_0 is the
// total variation.
inline double seminorm(const Datum& d, int n) {
    if (n < 0) throw std::invalid_argument("seminorm: n must be >= 0");
    double acc = 0.0;
    for (const Atom& a : d.measure.atoms())
        acc += std::abs(a.c) * std::exp(static_cast<double>(n) * std::abs(a.y));
    return acc;
}

struct MetricResult {
    double value = 0.0;
    double tail_bound = 0.0;  // truncation tail sum_{n > n_terms} 2^{-n}
};

// d(f, g) = sum_n 2^{-n} ||f-g||_n / (1 + ||f-g||_n), truncated after
// n_terms terms with the reported tail bound.
inline MetricResult metric(const Datum& d1, const Datum& d2, int n_terms) {
    if (n_terms < 1) throw std::invalid_argument("metric: n_terms must be >= 1");
    const Datum diff{d1.measure - d2.measure};
    MetricResult result;
    for (int n = 0; n <= n_terms; ++n) {
        const double s = seminorm(diff, n);
        const double ratio = std::isinf(s) ? 1.0 : s / (1.0 + s);
        result.value += std::ldexp(ratio, -n);
    }
    result.tail_bound = std::ldexp(1.0, -n_terms);
    return result;
}

struct ContractivityReport {
    bool contractive_forward = false;        // |multiplier| <= 1 for all t >= 0
    bool contractive_bidirectional = false;  // ... for all real t
};

// Condition |e^{i^N alpha x^N t / N!}| <= 1 for all real x and t >= 0:
// for even N it holds iff Re((-1)^{N/2} alpha) < 0 (one-sided), for odd N
// iff alpha is real (and then for every real t).
inline ContractivityReport contractivity_check(const ModelParams& params) {
    ContractivityReport report;
    if (params.order % 2 == 0) {
        const double sign = (params.order / 2) % 2 == 0 ? 1.0 : -1.0;
        report.contractive_forward = sign * params.alpha.real() < 0.0;
        report.contractive_bidirectional = false;
    } else {
        report.contractive_forward = params.alpha.imag() == 0.0;
        report.contractive_bidirectional = report.contractive_forward;
    }
    return report;
}

namespace detail {

inline Complex multiplier_exponent(const ModelParams& params, double y, double t) {
    return imag_unit_pow(params.order) * params.alpha * rpow_int(y, params.order) *
           t / to_double(factorial_big(params.order));
}

}  // namespace detail

// The Fourier multiplier of T(t) at frequency y: exp(i^N alpha y^N t / N!).
// Throws std::range_error instead of overflowing to infinity (solutions of
// non-contractive problems can explode in finite time).
inline Complex multiplier_factor(const ModelParams& params, double y, double t) {
    const Complex e = detail::multiplier_exponent(params, y, t);
    if (e.real() > 690.0)
        throw std::range_error("multiplier_factor: weight magnitude exceeds 1e300");
    return std::exp(e);
}

// The multiplier of T(t) as a value: acts on an atomic measure by
// c_j -> c_j factor(y_j).
struct Multiplier {
    ModelParams params;
    double t = 0.0;

    Complex factor(double y) const { return multiplier_factor(params, y, t); }
};

// T(t): atom weights multiplied by the Fourier multiplier. T(0) = identity.
inline Datum apply_semigroup(const ModelParams& params, const Datum& d, double t) {
    std::vector<Atom> atoms;
    atoms.reserve(d.measure.size());
    for (const Atom& a : d.measure.atoms())
        atoms.push_back(Atom{a.y, a.c * multiplier_factor(params, a.y, t)});
    return Datum{AtomicMeasure(std::move(atoms))};
}

// Generator A: atom weights multiplied by i^N alpha y^N / N!.
inline Datum apply_generator(const ModelParams& params, const Datum& d) {
    const double fact = to_double(factorial_big(params.order));
    std::vector<Atom> atoms;
    atoms.reserve(d.measure.size());
    for (const Atom& a : d.measure.atoms())
        atoms.push_back(Atom{a.y, a.c * imag_unit_pow(params.order) * params.alpha *
                                      rpow_int(a.y, params.order) / fact});
    return Datum{AtomicMeasure(std::move(atoms))};
}

// u(t, x) = sum_j c_j e^{i x y_j} exp(i^N alpha y_j^N t / N!): the spectral
// solution, used as the oracle for the probabilistic solvers.
inline Complex exact_solution(const ModelParams& params, const Datum& d, double t,
                              double x) {
    Complex acc{0.0, 0.0};
    for (const Atom& a : d.measure.atoms())
        acc += a.c * std::exp(Complex{0.0, x * a.y}) *
               multiplier_factor(params, a.y, t);
    return acc;
}

// Spectral x-derivative of order m evaluated pointwise (weights times (iy)^m).
inline Complex spectral_derivative(const ModelParams& params, const Datum& d,
                                   double t, double x, int m) {
    Complex acc{0.0, 0.0};
    for (const Atom& a : d.measure.atoms())
        acc += a.c * cpow_int(Complex{0.0, a.y}, m) *
               std::exp(Complex{0.0, x * a.y}) * multiplier_factor(params, a.y, t);
    return acc;
}

}  // namespace heatwalk
