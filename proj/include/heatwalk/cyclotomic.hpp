#pragma once

#include <complex>
#include <map>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatwalk/model.hpp"
#include "heatwalk/numeric.hpp"

namespace heatwalk {

// Degree cap for the cyclotomic basis; walks with phi(N) beyond this are
// out of scope for the exact-lattice machinery.
inline constexpr int kDefaultDegreeCap = 64;

/**
 * The N-th cyclotomic polynomial Phi_N, monic with integer coefficients,
 * computed through the divisor recurrence x^N - 1 = prod_{d|N} Phi_d.
 *
 * coeffs[k] is the coefficient of x^k; coeffs.size() == phi(N) + 1.
 */
struct CyclotomicPolynomial {
    int order = 0;
    std::vector<std::int64_t> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

namespace detail {

// Exact division of integer polynomials; remainder must vanish.
inline std::vector<std::int64_t> poly_divide_exact(std::vector<std::int64_t> num,
                                                   const std::vector<std::int64_t>& den) {
    const int dn = static_cast<int>(num.size()) - 1;
    const int dd = static_cast<int>(den.size()) - 1;
    std::vector<std::int64_t> quot(dn - dd + 1, 0);
    for (int d = dn; d >= dd; --d) {
        const std::int64_t c = num[d];
        if (c == 0) continue;
        quot[d - dd] = c;  // den is monic
        for (int i = 0; i <= dd; ++i) num[d - dd + i] -= c * den[i];
    }
    for (std::int64_t c : num)
        if (c != 0) throw std::logic_error("poly_divide_exact: nonzero remainder");
    return quot;
}

}  // namespace detail

inline CyclotomicPolynomial cyclotomic_polynomial(int order,
                                                  int degree_cap = kDefaultDegreeCap) {
    if (order < 2)
        throw std::invalid_argument("cyclotomic_polynomial: order must be >= 2");
    if (euler_phi(order) > degree_cap)
        throw std::invalid_argument(
            "cyclotomic_polynomial: phi(order) exceeds the degree cap (" +
            std::to_string(degree_cap) + ")");
    // x^order - 1 divided by the product of Phi_d over proper divisors d.
    std::vector<std::int64_t> num(order + 1, 0);
    num[0] = -1;
    num[order] = 1;
    for (int d = 1; d < order; ++d) {
        if (order % d != 0) continue;
        std::vector<std::int64_t> phi_d;
        if (d == 1) {
            phi_d = {-1, 1};  // x - 1
        } else {
            phi_d = cyclotomic_polynomial(d, degree_cap).coeffs;
        }
        num = detail::poly_divide_exact(std::move(num), phi_d);
    }
    return CyclotomicPolynomial{order, std::move(num)};
}

namespace detail {

inline const CyclotomicPolynomial& cached_cyclotomic(int order) {
    thread_local std::map<int, CyclotomicPolynomial> cache;
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, cyclotomic_polynomial(order)).first;
    return it->second;
}

}  // namespace detail

/**
 * A walk position written exactly as an integer combination of N-th roots
 * of unity, canonicalized modulo Phi_N. Canonical vectors are a basis
 * representation, so two points are equal as complex numbers iff their
 * coefficient vectors are identical.
 *
 * Coefficients are bounded by the number of steps taken, which the
 * enumeration state cap keeps far below the int64 range; exact counts and
 * probabilities downstream use arbitrary precision instead.
 */
class CyclotomicPoint {
public:
    static CyclotomicPoint zero(int order) {
        return CyclotomicPoint(order, std::vector<std::int64_t>(
                                          detail::cached_cyclotomic(order).degree(), 0));
    }

    // Canonical representation of zeta_N^k.
    static CyclotomicPoint direction(int order, int k) {
        if (k < 0 || k >= order)
            throw std::out_of_range("CyclotomicPoint::direction: k must lie in [0, N)");
        std::vector<std::int64_t> raw(order, 0);
        raw[k] = 1;
        return from_raw(order, std::move(raw));
    }

    // Reduce an arbitrary integer vector (degree < its length) mod Phi_N.
    static CyclotomicPoint from_raw(int order, std::vector<std::int64_t> raw) {
        const CyclotomicPolynomial& phi = detail::cached_cyclotomic(order);
        const int deg = phi.degree();
        if (static_cast<int>(raw.size()) < deg) raw.resize(deg, 0);
        for (int d = static_cast<int>(raw.size()) - 1; d >= deg; --d) {
            const std::int64_t c = raw[d];
            if (c == 0) continue;
            for (int i = 0; i < deg; ++i) raw[d - deg + i] -= c * phi.coeffs[i];
            raw[d] = 0;
        }
        raw.resize(deg);
        return CyclotomicPoint(order, std::move(raw));
    }

    int order() const { return order_; }
    const std::vector<std::int64_t>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (std::int64_t c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    CyclotomicPoint operator+(const CyclotomicPoint& other) const {
        require_same_order(other);
        std::vector<std::int64_t> sum(coeffs_);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += other.coeffs_[i];
        // Canonical + canonical keeps degree < deg(Phi_N); no reduction needed.
        return CyclotomicPoint(order_, std::move(sum));
    }

    CyclotomicPoint operator-() const {
        std::vector<std::int64_t> neg(coeffs_);
        for (auto& c : neg) c = -c;
        return CyclotomicPoint(order_, std::move(neg));
    }

    bool operator==(const CyclotomicPoint& other) const {
        return order_ == other.order_ && coeffs_ == other.coeffs_;
    }

    bool operator<(const CyclotomicPoint& other) const {
        if (order_ != other.order_) return order_ < other.order_;
        return coeffs_ < other.coeffs_;
    }

    // scale * alpha^{1/N} * sum_j coeffs[j] zeta^j in floating point.
    Complex to_complex(const ModelParams& params, double scale = 1.0) const {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j] == 0) continue;
            acc += static_cast<double>(coeffs_[j]) *
                   std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / order_);
        }
        return scale * params.principal_root() * acc;
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) os << ';';
            os << coeffs_[i];
        }
        return os.str();
    }

private:
    CyclotomicPoint(int order, std::vector<std::int64_t> coeffs)
        : order_(order), coeffs_(std::move(coeffs)) {}

    void require_same_order(const CyclotomicPoint& other) const {
        if (order_ != other.order_)
            throw std::invalid_argument("CyclotomicPoint: order mismatch");
    }

    int order_;
    std::vector<std::int64_t> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const CyclotomicPoint& p) {
    return os << p.to_string();
}

}  // namespace heatwalk
