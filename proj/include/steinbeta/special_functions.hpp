#pragma once

// Scalar special functions: log-gamma, log-beta, rising/falling factorials,
// the regularized incomplete beta function and its inverse.
//
// Everything here is pure and reentrant.

#include "steinbeta/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace steinbeta {

/// A strictly positive, finite real. Construction from an invalid value
/// throws steinbeta::domain_error, so any function taking a PositiveReal has
/// its precondition checked at the call boundary.
class PositiveReal {
public:
    PositiveReal(double v) : value_(v) // NOLINT(google-explicit-constructor)
    {
        if (!(std::isfinite(v) && v > 0.0)) {
            detail::fail_domain("PositiveReal", "value must be finite and > 0, got " + std::to_string(v));
        }
    }

    [[nodiscard]] double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; } // NOLINT(google-explicit-constructor)

private:
    double value_;
};

/// Logarithm of a real number's magnitude plus its sign. sign == 0 encodes an
/// exact zero, in which case log_abs is -infinity.
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;

    [[nodiscard]] bool is_zero() const noexcept { return sign == 0; }
    [[nodiscard]] double value() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286061;

// (zeta(n) - 1) / n for n = 2..30.
inline constexpr std::array<double, 29> zeta_minus_one_over_n = [] {
    constexpr std::array<double, 29> zm1{
        0.64493406684822643647,    0.2020569031595942854,     0.082323233711138191516,
        0.036927755143369926331,   0.017343061984449139715,   0.0083492773819228268398,
        0.0040773561979443393787,  0.0020083928260822144179,  0.00099457512781808533715,
        0.0004941886041194645587,  0.00024608655330804829864, 0.00012271334757848914675,
        0.000061248135058704829259, 0.000030588236307020493552, 0.000015282259408651871733,
        7.6371976378997622736e-6,  3.8172932649998398565e-6,  1.9082127165539389257e-6,
        9.5396203387279611315e-7,  4.7693298678780646312e-7,  2.3845050272773299e-7,
        1.1921992596531107307e-7,  5.9608189051259479612e-8,  2.9803503514652280186e-8,
        1.4901554828365041235e-8,  7.450711789835429492e-9,   3.7253340247884570548e-9,
        1.8626597235130490064e-9,  9.3132743241966818287e-10,
    };
    std::array<double, 29> out{};
    for (std::size_t i = 0; i < zm1.size(); ++i) {
        out[i] = zm1[i] / static_cast<double>(i + 2);
    }
    return out;
}();

// sum_{n>=2} (-1)^n (zeta(n) - 1) z^n / n, valid and fully converged for |z| <= 1/2.
inline double log_gamma_tail_series(double z) noexcept
{
    const double t = -z;
    double acc = 0.0;
    for (std::size_t i = zeta_minus_one_over_n.size(); i-- > 0;) {
        acc = acc * t + zeta_minus_one_over_n[i];
    }
    return acc * t * t;
}

// Stirling series, accurate to a few ulp for x >= 10.
inline double log_gamma_stirling(double x) noexcept
{
    constexpr double half_log_two_pi = 0.91893853320467274178;
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double series =
        r * (1.0 / 12.0
             + r2 * (-1.0 / 360.0
                     + r2 * (1.0 / 1260.0
                             + r2 * (-1.0 / 1680.0
                                     + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360360.0 + r2 * (1.0 / 156.0)))))));
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

} // namespace detail

/// ln Gamma(x) for x > 0.
///
/// Near the roots at 1 and 2 a power series in (x - 1) or (x - 2) is used,
/// which keeps the relative error small where ln Gamma passes through zero.
/// Large arguments use the Stirling series; the remaining range is shifted up
/// into it by the recurrence Gamma(x + 1) = x Gamma(x).
inline double log_gamma(PositiveReal xr)
{
    const double x = xr;
    if (x < 0.5) {
        return -std::log1p(x) + x * (1.0 - detail::euler_gamma) + detail::log_gamma_tail_series(x) - std::log(x);
    }
    if (x <= 1.5) {
        const double z = x - 1.0;
        return -std::log1p(z) + z * (1.0 - detail::euler_gamma) + detail::log_gamma_tail_series(z);
    }
    if (x <= 2.5) {
        const double z = x - 2.0;
        return z * (1.0 - detail::euler_gamma) + detail::log_gamma_tail_series(z);
    }
    if (x >= 10.0) {
        return detail::log_gamma_stirling(x);
    }
    double shifted = x;
    double product = 1.0;
    while (shifted < 10.0) {
        product *= shifted;
        shifted += 1.0;
    }
    return detail::log_gamma_stirling(shifted) - std::log(product);
}

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
inline double log_beta(PositiveReal a, PositiveReal b)
{
    return log_gamma(a) + log_gamma(b) - log_gamma(a.value() + b.value());
}

/// ln of the rising factorial (x)_k = x (x + 1) ... (x + k - 1); (x)_0 = 1.
inline double log_rising_factorial(PositiveReal x, std::int64_t k)
{
    if (k < 0) {
        detail::fail_domain("log_rising_factorial", "k must be >= 0");
    }
    if (k == 0) {
        return 0.0;
    }
    // Short products are summed directly; they are exact up to rounding.
    if (k <= 16) {
        double acc = 0.0;
        for (std::int64_t j = 0; j < k; ++j) {
            acc += std::log(x.value() + static_cast<double>(j));
        }
        return acc;
    }
    return log_gamma(x.value() + static_cast<double>(k)) - log_gamma(x);
}

/// ln |[x]_k| with sign, where [x]_k = x (x - 1) ... (x - k + 1) and [x]_0 = 1.
/// An exact zero factor yields sign == 0.
inline SignedLog log_falling_factorial(double x, std::int64_t k)
{
    if (k < 0) {
        detail::fail_domain("log_falling_factorial", "k must be >= 0");
    }
    if (!std::isfinite(x)) {
        detail::fail_domain("log_falling_factorial", "x must be finite");
    }
    SignedLog out;
    for (std::int64_t j = 0; j < k; ++j) {
        const double t = x - static_cast<double>(j);
        if (t == 0.0) {
            return {-std::numeric_limits<double>::infinity(), 0};
        }
        if (t < 0.0) {
            out.sign = -out.sign;
        }
        out.log_abs += std::log(std::abs(t));
    }
    return out;
}

namespace detail {

// Modified Lentz evaluation of the incomplete beta continued fraction.
inline double incomplete_beta_cf(double a, double b, double x)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_iter = 20000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) {
        d = tiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double md = m;
        const double m2 = 2.0 * md;
        double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= eps) {
            return h;
        }
    }
    throw numerical_error("incomplete_beta_cf: no convergence for a=" + std::to_string(a) + " b=" + std::to_string(b)
                          + " x=" + std::to_string(x));
}

// x^a (1-x)^b / (a B(a,b)) evaluated in log space.
inline double incomplete_beta_prefactor(double a, double b, double x, double log_b)
{
    return std::exp(a * std::log(x) + b * std::log1p(-x) - log_b) / a;
}

} // namespace detail

/// Regularized incomplete beta function I_x(a, b) for x in [0, 1].
inline double regularized_incomplete_beta(double x, PositiveReal a, PositiveReal b)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        detail::fail_domain("regularized_incomplete_beta", "x must lie in [0, 1], got " + std::to_string(x));
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x == 1.0) {
        return 1.0;
    }
    const double lb = log_beta(a, b);
    double result = 0.0;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        result = detail::incomplete_beta_prefactor(a, b, x, lb) * detail::incomplete_beta_cf(a, b, x);
    } else {
        const double y = 1.0 - x;
        result = 1.0 - detail::incomplete_beta_prefactor(b, a, y, lb) * detail::incomplete_beta_cf(b, a, y);
    }
    return std::clamp(result, 0.0, 1.0);
}

/// Inverse of x -> I_x(a, b). Safeguarded Newton iteration inside a shrinking
/// bisection bracket; converges in x to a few ulp, which also gives
/// |I_x(a, b) - p| <= 1e-12.
inline double beta_quantile(double p, PositiveReal a, PositiveReal b)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        detail::fail_domain("beta_quantile", "p must lie in [0, 1], got " + std::to_string(p));
    }
    if (p == 0.0) {
        return 0.0;
    }
    if (p == 1.0) {
        return 1.0;
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double lb = log_beta(a, b);
    double lo = 0.0;
    double hi = 1.0;
    double x = a / (a + b);
    for (int iter = 0; iter < 2000; ++iter) {
        const double fx = regularized_incomplete_beta(x, a, b) - p;
        if (fx == 0.0) {
            return x;
        }
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double density = std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lb);
        double next = x - fx / density;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 2.0 * eps * next || hi - lo <= 2.0 * eps * hi) {
            return next;
        }
        x = next;
    }
    throw numerical_error("beta_quantile: no convergence for p=" + std::to_string(p));
}

} // namespace steinbeta
