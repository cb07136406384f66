#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "heatwalk/numeric.hpp"

namespace heatwalk {

// Parameters of the order-N problem du/dt = (alpha/N!) d^N u / dx^N.
//
// N = 2 is admitted for classical-CLT cross-checks; the walk construction
// itself assumes N > 2 and reports flag order 2 as outside that scope.
struct ModelParams {
    int order;
    Complex alpha;

    ModelParams(int order_, Complex alpha_) : order(order_), alpha(alpha_) {
        if (order < 2)
            throw std::invalid_argument("ModelParams: order must be >= 2");
        if (alpha == Complex{0.0, 0.0})
            throw std::invalid_argument("ModelParams: alpha must be nonzero");
    }

    // Principal branch of alpha^{1/N}: |alpha|^{1/N} e^{i Arg(alpha)/N},
    // Arg in (-pi, pi]. Any other branch permutes the direction set and
    // leaves the step distribution unchanged.
    Complex principal_root() const {
        return std::polar(std::pow(std::abs(alpha), 1.0 / order),
                          std::arg(alpha) / order);
    }

    bool outside_paper_scope() const { return order == 2; }
};

}  // namespace heatwalk
