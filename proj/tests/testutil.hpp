#pragma once

#include <boost/math/distributions/chi_squared.hpp>

namespace testutil {

// Chi-squared tests across the suite run at 1% significance with a
// Bonferroni correction over the family below.
inline constexpr int kChiSquareFamilySize = 2;

inline double chi_square_critical(int dof) {
    const double alpha = 0.01 / kChiSquareFamilySize;
    return boost::math::quantile(boost::math::chi_squared(dof), 1.0 - alpha);
}

}  // namespace testutil
