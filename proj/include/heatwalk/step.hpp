#pragma once

#include <complex>
#include <vector>

#include "heatwalk/model.hpp"
#include "heatwalk/numeric.hpp"
#include "heatwalk/rng.hpp"

namespace heatwalk {

/**
 * The step random variable xi: uniform on the N points alpha^{1/N} zeta^k,
 * zeta = e^{2 pi i / N}. Immutable; sampling takes a caller-owned Rng.
 */
class StepDistribution {
public:
    explicit StepDistribution(const ModelParams& params)
        : params_(params), root_(params.principal_root()) {
        atoms_.reserve(params.order);
        for (int k = 0; k < params.order; ++k)
            atoms_.push_back(root_ * std::polar(1.0, 2.0 * kPi * k / params.order));
    }

    const ModelParams& params() const { return params_; }
    const std::vector<Complex>& atoms() const { return atoms_; }
    Complex root() const { return root_; }

    // E[xi^m]: alpha^{m/N} when N | m, zero otherwise.
    Complex moment(long long m) const {
        if (m < 0) throw std::invalid_argument("StepDistribution::moment: m >= 0");
        if (m % params_.order != 0) return {0.0, 0.0};
        return cpow_int(params_.alpha, m / params_.order);
    }

    // The same moment by direct summation over the atoms (test oracle).
    Complex moment_direct(long long m) const {
        Complex acc{0.0, 0.0};
        for (const Complex& a : atoms_) acc += cpow_int(a, m);
        return acc / static_cast<double>(params_.order);
    }

    // E[|xi|^m] = |alpha|^{m/N}.
    double abs_moment(long long m) const {
        if (m < 0) throw std::invalid_argument("StepDistribution::abs_moment: m >= 0");
        return std::pow(std::abs(params_.alpha),
                        static_cast<double>(m) / params_.order);
    }

    // psi_xi(lambda) = (1/N) sum_k exp(i lambda atom_k); entire in lambda.
    Complex char_fn(Complex lambda) const {
        Complex acc{0.0, 0.0};
        const Complex ilam = Complex{0.0, 1.0} * lambda;
        for (const Complex& a : atoms_) acc += std::exp(ilam * a);
        return acc / static_cast<double>(params_.order);
    }

    // Covariance of xi as a random vector in the plane: (1/2)|alpha|^{2/N} I.
    // The identity requires N >= 3 (for N = 2 the two atoms are collinear);
    // planar_second_moments() gives the honest matrix for cross-checks.
    Mat2 covariance() const {
        const double v = 0.5 * std::pow(std::abs(params_.alpha), 2.0 / params_.order);
        return Mat2{v, 0.0, 0.0, v};
    }

    Mat2 planar_second_moments() const {
        Mat2 m;
        for (const Complex& a : atoms_) {
            m.xx += a.real() * a.real();
            m.xy += a.real() * a.imag();
            m.yy += a.imag() * a.imag();
        }
        const double n = static_cast<double>(params_.order);
        m.xx /= n;
        m.xy /= n;
        m.yy /= n;
        m.yx = m.xy;
        return m;
    }

    struct Sample {
        Complex value;
        int direction;  // k in [0, N): the sampled root-of-unity index
    };

    Sample sample(Rng& rng) const {
        const int k = static_cast<int>(
            rng.bounded(static_cast<std::uint32_t>(params_.order)));
        return Sample{atoms_[k], k};
    }

private:
    ModelParams params_;
    Complex root_;
    std::vector<Complex> atoms_;
};

}  // namespace heatwalk
