#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cavity {

using cplx = std::complex<double>;

/// Complex amplitude kept as a polynomial in the acceleration parameter h,
/// truncated at degree 2. All arithmetic drops terms of degree >= 3, so a
/// quantity built from these coefficients is automatically "to second order".
struct OrderSeries {
    cplx c0{0.0, 0.0};  ///< coefficient of h^0
    cplx c1{0.0, 0.0};  ///< coefficient of h^1
    cplx c2{0.0, 0.0};  ///< coefficient of h^2

    OrderSeries() = default;
    OrderSeries(cplx a0) : c0(a0) {}
    OrderSeries(cplx a0, cplx a1, cplx a2) : c0(a0), c1(a1), c2(a2) {}

    static OrderSeries zero() { return {}; }
    static OrderSeries one() { return OrderSeries(cplx(1.0, 0.0)); }
    /// v * h^order
    static OrderSeries of_order(int order, cplx v) {
        switch (order) {
            case 0: return OrderSeries(v, 0.0, 0.0);
            case 1: return OrderSeries(0.0, v, 0.0);
            case 2: return OrderSeries(0.0, 0.0, v);
            default: throw std::invalid_argument("OrderSeries: order must be 0, 1 or 2");
        }
    }

    OrderSeries operator+(const OrderSeries& o) const {
        return {c0 + o.c0, c1 + o.c1, c2 + o.c2};
    }
    OrderSeries operator-(const OrderSeries& o) const {
        return {c0 - o.c0, c1 - o.c1, c2 - o.c2};
    }
    OrderSeries operator-() const { return {-c0, -c1, -c2}; }
    OrderSeries& operator+=(const OrderSeries& o) {
        c0 += o.c0; c1 += o.c1; c2 += o.c2;
        return *this;
    }
    OrderSeries& operator-=(const OrderSeries& o) {
        c0 -= o.c0; c1 -= o.c1; c2 -= o.c2;
        return *this;
    }
    /// Cauchy product, degree-truncated at 2.
    OrderSeries operator*(const OrderSeries& o) const {
        return {c0 * o.c0,
                c0 * o.c1 + c1 * o.c0,
                c0 * o.c2 + c1 * o.c1 + c2 * o.c0};
    }
    OrderSeries& operator*=(const OrderSeries& o) { return *this = *this * o; }
    OrderSeries operator*(cplx s) const { return {c0 * s, c1 * s, c2 * s}; }
    OrderSeries operator*(double s) const { return {c0 * s, c1 * s, c2 * s}; }

    OrderSeries conj() const {
        return {std::conj(c0), std::conj(c1), std::conj(c2)};
    }
    /// |x|^2 as a series: x * conj(x), truncated.
    OrderSeries abs2() const { return *this * conj(); }

    /// Real part per coefficient.
    OrderSeries real_part() const {
        return {cplx(c0.real(), 0.0), cplx(c1.real(), 0.0), cplx(c2.real(), 0.0)};
    }

    /// Series of the modulus |x|, exact to the representable order for any
    /// leading order of x. For leading order k, |x| = |c_k| h^k (1 + ...);
    /// the correction term survives truncation only for k <= 1.
    OrderSeries abs_series() const {
        constexpr double kZero = 1e-300;
        if (std::abs(c0) > kZero) return abs2().sqrt_series();
        if (std::abs(c1) > kZero) {
            double a1 = std::abs(c1);
            return {0.0, a1, (c2 * std::conj(c1)).real() / a1};
        }
        return {0.0, 0.0, std::abs(c2)};
    }

    /// sqrt(x0 + x1 h + x2 h^2) expanded around x0 when x0 != 0; when the
    /// series starts at h^2 the root is exactly sqrt(x2) * h. A leading h^1
    /// term would need fractional orders and is rejected.
    OrderSeries sqrt_series() const {
        constexpr double kZero = 1e-13;
        if (std::abs(c0) > kZero) {
            cplx s0 = std::sqrt(c0);
            cplx s1 = c1 / (2.0 * s0);
            cplx s2 = c2 / (2.0 * s0) - c1 * c1 / (8.0 * s0 * s0 * s0);
            return {s0, s1, s2};
        }
        if (std::abs(c1) > kZero)
            throw std::domain_error("OrderSeries::sqrt_series: leading order h^1 has no series root");
        return {0.0, std::sqrt(c2), 0.0};
    }

    cplx eval(double h) const { return c0 + c1 * h + c2 * h * h; }

    double max_abs() const {
        return std::max({std::abs(c0), std::abs(c1), std::abs(c2)});
    }

    /// Index of the lowest order whose coefficient exceeds tol; 3 when all do.
    int leading_order(double tol = 1e-12) const {
        if (std::abs(c0) > tol) return 0;
        if (std::abs(c1) > tol) return 1;
        if (std::abs(c2) > tol) return 2;
        return 3;
    }

    bool near(const OrderSeries& o, double tol = 1e-12) const {
        return (*this - o).max_abs() <= tol;
    }
};

inline OrderSeries operator*(cplx s, const OrderSeries& x) { return x * s; }
inline OrderSeries operator*(double s, const OrderSeries& x) { return x * s; }

}  // namespace cavity
