#pragma once

// The Beta Stein equation
//
//   w (1 - w) f'(w) + (alpha (1 - w) - beta w) f(w) = h(w) - E h(Z),  Z ~ Beta(alpha, beta),
//
// its bounded solution
//
//   f(w) =  w^-alpha (1-w)^-beta  int_0^w u^(alpha-1) (1-u)^(beta-1) (h(u) - E h(Z)) du
//        = -w^-alpha (1-w)^-beta  int_w^1 u^(alpha-1) (1-u)^(beta-1) (h(u) - E h(Z)) du,
//
// and the sup-norm constants b0, b1 for f'. Which constants apply depends on
// how w^(alpha-1) (1-w)^(beta-1) rises and falls, classified at the end.

#include "steinbeta/distributions.hpp"
#include "steinbeta/errors.hpp"
#include "steinbeta/format.hpp"
#include "steinbeta/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

namespace steinbeta {

/// A Lipschitz test function on [0, 1] with its almost-everywhere derivative.
/// `kinks` lists points where h' jumps; quadrature splits there.
struct LipschitzTest {
    std::string name;
    std::function<double(double)> h;
    std::function<double(double)> dh;
    double hprime_sup = 1.0;
    std::vector<double> kinks;
};

namespace lipschitz {

inline LipschitzTest identity()
{
    return {"u", [](double u) { return u; }, [](double) { return 1.0; }, 1.0, {}};
}

inline LipschitzTest constant(double c)
{
    return {"const", [c](double) { return c; }, [](double) { return 0.0; }, 0.0, {}};
}

/// h(u) = u (1 - u), the lower-bound witness.
inline LipschitzTest parabola()
{
    return {"u(1-u)", [](double u) { return u * (1.0 - u); }, [](double u) { return 1.0 - 2.0 * u; }, 1.0, {}};
}

inline LipschitzTest half_square()
{
    return {"u^2/2", [](double u) { return 0.5 * u * u; }, [](double u) { return u; }, 1.0, {}};
}

inline LipschitzTest distance_to(double c)
{
    return {"|u-" + format_real(c) + "|", [c](double u) { return std::abs(u - c); },
            [c](double u) { return u < c ? -1.0 : 1.0; }, 1.0, {c}};
}

/// sin(k pi u) / (k pi), so that ||h'|| = 1.
inline LipschitzTest sine_bump(int k)
{
    const double omega = k * std::numbers::pi;
    return {"sin(" + std::to_string(k) + "pi u)", [omega](double u) { return std::sin(omega * u) / omega; },
            [omega](double u) { return std::cos(omega * u); }, 1.0, {}};
}

/// The seven-member family used by the property and acceptance suites.
inline std::vector<LipschitzTest> standard_family()
{
    return {identity(),       parabola(),   distance_to(0.25), distance_to(0.5),
            distance_to(0.75), sine_bump(1), sine_bump(2)};
}

/// Builds a test from its command-line spelling: identity, parabola,
/// half-square, distance:<c>, sine:<k> or constant:<c>.
inline LipschitzTest parse(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto number = [&](auto& out) {
        const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), out);
        if (arg.empty() || res.ec != std::errc{} || res.ptr != arg.data() + arg.size()) {
            detail::fail_domain("test", "'" + text + "' needs a numeric argument after ':'");
        }
    };
    if (colon == std::string::npos) {
        if (text == "identity") {
            return identity();
        }
        if (text == "parabola") {
            return parabola();
        }
        if (text == "half-square") {
            return half_square();
        }
    } else if (head == "distance") {
        double c = 0.0;
        number(c);
        if (!(c >= 0.0 && c <= 1.0)) {
            detail::fail_domain("test", "distance point must lie in [0, 1]");
        }
        return distance_to(c);
    } else if (head == "sine") {
        int k = 0;
        number(k);
        if (k < 1) {
            detail::fail_domain("test", "sine frequency must be >= 1");
        }
        return sine_bump(k);
    } else if (head == "constant") {
        double c = 0.0;
        number(c);
        return constant(c);
    }
    detail::fail_domain("test", "unknown test '" + text
                                    + "'; expected identity, parabola, half-square, distance:<c>, sine:<k> or constant:<c>");
}

} // namespace lipschitz

namespace detail {

inline std::vector<double> mapped_kinks(const LipschitzTest& t, const std::function<std::optional<double>(double)>& map)
{
    std::vector<double> out;
    for (double c : t.kinks) {
        if (auto s = map(c)) {
            out.push_back(*s);
        }
    }
    return out;
}

/// `abs_tol` is chosen per call so that it maps to about 1e-15 in the
/// quantity finally returned (f or E h(Z)).
inline QuadratureOptions stein_quadrature(double abs_tol)
{
    QuadratureOptions opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = 1e-13;
    opt.max_intervals = 20000;
    return opt;
}

} // namespace detail

/// E h(Z) for Z ~ Beta(alpha, beta), to about 1e-13 absolute.
///
/// The integral is split at the mean m; on each side the substitutions
/// u = m s^(1/alpha) and u = 1 - (1 - m) t^(1/beta) absorb the endpoint
/// factors u^(alpha-1) and (1-u)^(beta-1), so the integrands stay bounded.
inline double beta_expectation(const BetaLaw& law, const LipschitzTest& test)
{
    const double a = law.alpha;
    const double b = law.beta;
    const double m = law.mean();
    const double lb = law.log_normalizer();

    auto lower = [&](double s) {
        const double u = m * std::pow(s, 1.0 / a);
        return test.h(u) * std::pow(1.0 - u, b - 1.0);
    };
    auto upper = [&](double t) {
        const double u = 1.0 - (1.0 - m) * std::pow(t, 1.0 / b);
        return test.h(u) * std::pow(u, a - 1.0);
    };
    const auto lower_kinks = detail::mapped_kinks(test, [&](double c) -> std::optional<double> {
        if (c > 0.0 && c < m) {
            return std::pow(c / m, a);
        }
        return std::nullopt;
    });
    const auto upper_kinks = detail::mapped_kinks(test, [&](double c) -> std::optional<double> {
        if (c > m && c < 1.0) {
            return std::pow((1.0 - c) / (1.0 - m), b);
        }
        return std::nullopt;
    });
    const double lower_weight = std::exp(a * std::log(m) - std::log(a) - lb);
    const double upper_weight = std::exp(b * std::log1p(-m) - std::log(b) - lb);
    return lower_weight * integrate(lower, 0.0, 1.0, lower_kinks, detail::stein_quadrature(1e-15 / lower_weight)).value
           + upper_weight * integrate(upper, 0.0, 1.0, upper_kinks, detail::stein_quadrature(1e-15 / upper_weight)).value;
}

/// f(w) by the forward integral, evaluated directly at one point.
inline double stein_value_forward(const BetaLaw& law, const LipschitzTest& test, double bh, double w)
{
    const double a = law.alpha;
    const double b = law.beta;
    auto integrand = [&](double s) {
        const double u = w * std::pow(s, 1.0 / a);
        return std::pow(1.0 - u, b - 1.0) * (test.h(u) - bh);
    };
    const auto kinks = detail::mapped_kinks(test, [&](double c) -> std::optional<double> {
        if (c > 0.0 && c < w) {
            return std::pow(c / w, a);
        }
        return std::nullopt;
    });
    const double scale = a * std::pow(1.0 - w, b);
    const double integral = integrate(integrand, 0.0, 1.0, kinks, detail::stein_quadrature(1e-15 * scale)).value;
    return integral / scale;
}

/// f(w) by the backward integral, evaluated directly at one point.
inline double stein_value_backward(const BetaLaw& law, const LipschitzTest& test, double bh, double w)
{
    const double a = law.alpha;
    const double b = law.beta;
    auto integrand = [&](double t) {
        const double u = 1.0 - (1.0 - w) * std::pow(t, 1.0 / b);
        return std::pow(u, a - 1.0) * (test.h(u) - bh);
    };
    const auto kinks = detail::mapped_kinks(test, [&](double c) -> std::optional<double> {
        if (c > w && c < 1.0) {
            return std::pow((1.0 - c) / (1.0 - w), b);
        }
        return std::nullopt;
    });
    const double scale = b * std::pow(w, a);
    const double integral = integrate(integrand, 0.0, 1.0, kinks, detail::stein_quadrature(1e-15 * scale)).value;
    return -integral / scale;
}

/// f(w) at a single point, forward form below the mean and backward above.
inline double stein_value_at(const BetaLaw& law, const LipschitzTest& test, double bh, double w)
{
    return w <= law.mean() ? stein_value_forward(law, test, bh, w) : stein_value_backward(law, test, bh, w);
}

/// f'(w) from the Stein equation, given f(w).
inline double stein_derivative_from_value(const BetaLaw& law, const LipschitzTest& test, double bh, double w,
                                          double f)
{
    const double a = law.alpha;
    const double b = law.beta;
    return (test.h(w) - bh - (a * (1.0 - w) - b * w) * f) / (w * (1.0 - w));
}

/// Grid solution of the Stein equation.
struct SteinSolution {
    BetaLaw law;
    LipschitzTest test;
    double bh = 0.0;
    std::vector<double> grid;
    std::vector<double> f_values;
    std::vector<double> fprime_values;
};

struct SupNorms {
    double f_sup = 0.0;
    double fprime_sup = 0.0;
};

inline constexpr double stein_endpoint_margin = 1e-6;
inline constexpr std::size_t stein_default_grid = 2048;

/// Points on [eps, 1 - eps] with Chebyshev clustering toward both ends.
inline std::vector<double> stein_grid(std::size_t size)
{
    std::vector<double> g(size);
    const double eps = stein_endpoint_margin;
    for (std::size_t i = 0; i < size; ++i) {
        const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(size - 1);
        g[i] = eps + (1.0 - 2.0 * eps) * 0.5 * (1.0 - std::cos(theta));
    }
    g.front() = eps;
    g.back() = 1.0 - eps;
    return g;
}

/// Solve the Stein equation for `test` on a clustered grid of `grid_size` points.
///
/// Below the mean f is propagated forward cell by cell from the first grid
/// point, above it backward from the last one:
///   F(w) = w^alpha (1-w)^beta f(w),  F(w_{i+1}) = F(w_i) + int_{w_i}^{w_{i+1}} ...
/// with every step rescaled so no power of w is formed on its own. f' then
/// comes from the equation itself.
inline SteinSolution solve_stein(const BetaLaw& law, const LipschitzTest& test,
                                 std::size_t grid_size = stein_default_grid)
{
    if (grid_size < 16) {
        detail::fail_domain("solve_stein", "grid_size must be >= 16");
    }
    const double a = law.alpha;
    const double b = law.beta;
    const double mean = law.mean();
    const double bh = beta_expectation(law, test);
    // Cell integrals are increments of f itself.
    const auto opt = detail::stein_quadrature(1e-16);

    SteinSolution sol{law, test, bh, stein_grid(grid_size), {}, {}};
    const auto& w = sol.grid;
    std::vector<double> f(grid_size, 0.0);

    auto cell_kinks = [&](double lo, double hi) {
        std::vector<double> out;
        for (double c : test.kinks) {
            if (c > lo && c < hi) {
                out.push_back(c);
            }
        }
        return out;
    };

    // Forward sweep over grid points at or below the mean.
    std::size_t split = 0;
    while (split < grid_size && w[split] <= mean) {
        ++split;
    }
    if (split > 0) {
        f[0] = stein_value_forward(law, test, bh, w[0]);
        for (std::size_t i = 0; i + 1 < split; ++i) {
            const double w0 = w[i];
            const double w1 = w[i + 1];
            auto integrand = [&](double u) {
                return std::exp((a - 1.0) * std::log(u / w1) + (b - 1.0) * std::log((1.0 - u) / (1.0 - w1)))
                       * (test.h(u) - bh) / (w1 * (1.0 - w1));
            };
            const double carry = std::exp(a * std::log(w0 / w1) + b * std::log((1.0 - w0) / (1.0 - w1)));
            f[i + 1] = carry * f[i] + integrate(integrand, w0, w1, cell_kinks(w0, w1), opt).value;
        }
    }
    // Backward sweep over grid points above the mean.
    if (split < grid_size) {
        f[grid_size - 1] = stein_value_backward(law, test, bh, w[grid_size - 1]);
        for (std::size_t i = grid_size - 1; i > split; --i) {
            const double w0 = w[i - 1];
            const double w1 = w[i];
            auto integrand = [&](double u) {
                return std::exp((a - 1.0) * std::log(u / w0) + (b - 1.0) * std::log((1.0 - u) / (1.0 - w0)))
                       * (test.h(u) - bh) / (w0 * (1.0 - w0));
            };
            const double carry = std::exp(a * std::log(w1 / w0) + b * std::log((1.0 - w1) / (1.0 - w0)));
            f[i - 1] = carry * f[i] - integrate(integrand, w0, w1, cell_kinks(w0, w1), opt).value;
        }
    }

    sol.fprime_values.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        sol.fprime_values[i] = stein_derivative_from_value(law, test, bh, w[i], f[i]);
    }
    sol.f_values = std::move(f);
    return sol;
}

/// Grid maxima of |f| and |f'|. These are lower estimates of the true sup norms.
inline SupNorms sup_norms(const SteinSolution& sol)
{
    SupNorms out;
    for (double v : sol.f_values) {
        out.f_sup = std::max(out.f_sup, std::abs(v));
    }
    for (double v : sol.fprime_values) {
        out.fprime_sup = std::max(out.fprime_sup, std::abs(v));
    }
    return out;
}

struct RefinedSupNorms {
    SupNorms norms;
    std::size_t grid_size = 0;
    bool converged = false;
};

/// Doubles the grid until both sup norms change by less than `tol`.
inline RefinedSupNorms refined_sup_norms(const BetaLaw& law, const LipschitzTest& test,
                                         std::size_t start_grid = stein_default_grid, double tol = 1e-6,
                                         std::size_t max_grid = 1U << 16U)
{
    RefinedSupNorms out;
    out.grid_size = start_grid;
    out.norms = sup_norms(solve_stein(law, test, start_grid));
    while (out.grid_size * 2 <= max_grid) {
        const std::size_t next = out.grid_size * 2;
        const SupNorms refined = sup_norms(solve_stein(law, test, next));
        const bool settled = std::abs(refined.f_sup - out.norms.f_sup) < tol
                             && std::abs(refined.fprime_sup - out.norms.fprime_sup) < tol;
        out.norms.f_sup = std::max(out.norms.f_sup, refined.f_sup);
        out.norms.fprime_sup = std::max(out.norms.fprime_sup, refined.fprime_sup);
        out.grid_size = next;
        if (settled) {
            out.converged = true;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Derivative bound constants

enum class BoundCase {
    both_at_most_two,       ///< alpha <= 2, beta <= 2
    alpha_above_two,        ///< alpha > 2,  beta <= 2
    beta_above_two,         ///< alpha <= 2, beta > 2
    both_above_two,         ///< alpha > 2,  beta > 2
};

inline const char* to_string(BoundCase c) noexcept
{
    switch (c) {
    case BoundCase::both_at_most_two: return "alpha<=2;beta<=2";
    case BoundCase::alpha_above_two: return "alpha>2;beta<=2";
    case BoundCase::beta_above_two: return "alpha<=2;beta>2";
    case BoundCase::both_above_two: return "alpha>2;beta>2";
    }
    return "?";
}

struct BoundConstants {
    double b0 = 0.0;
    double b1 = 0.0;
    BoundCase case_id = BoundCase::both_at_most_two;
};

/// Constants with ||f'|| <= b0 ||h - E h(Z)|| + b1 ||h'|| <= (b0 + b1) ||h'||.
inline BoundConstants bound_constants(PositiveReal alpha, PositiveReal beta)
{
    const double a = alpha;
    const double b = beta;
    const double s2 = (a + b - 2.0) * (a + b - 2.0);
    auto sq = [](double x) { return x * x; };
    if (a <= 2.0 && b <= 2.0) {
        return {4.0 * std::max(std::abs(a - 1.0), std::abs(b - 1.0)), 4.0 * (1.0 + std::max(a, b) / (a + b)),
                BoundCase::both_at_most_two};
    }
    if (a > 2.0 && b <= 2.0) {
        return {s2 * std::max((a - 1.0) / sq(a - 2.0), std::abs(b - 1.0) / sq(b)),
                s2 / sq(std::min(a - 2.0, b)) + 2.0 * std::max(a / (a - 2.0), 1.0), BoundCase::alpha_above_two};
    }
    if (a <= 2.0 && b > 2.0) {
        return {s2 * std::max(std::abs(a - 1.0) / sq(a), (b - 1.0) / sq(b - 2.0)),
                s2 / sq(std::min(a, b - 2.0)) + 2.0 * std::max(1.0, b / (b - 2.0)), BoundCase::beta_above_two};
    }
    return {s2 * std::max(1.0 / (a - 1.0), 1.0 / (b - 1.0)),
            s2 / sq(std::min(a - 1.0, b - 1.0)) + 2.0 * std::max(a / (a - 1.0), b / (b - 1.0)),
            BoundCase::both_above_two};
}

/// How much of each bound the standard test family actually uses: the
/// largest ||f|| / (2 ||h'|| / (alpha + beta)) and ||f'|| / ((b0 + b1) ||h'||)
/// over the family, with grid sup norms. Values near 1 mean the constant is
/// nearly attained; nothing here asserts either way.
struct BoundUsage {
    double f_ratio = 0.0;
    double fprime_ratio = 0.0;
    std::string f_test;
    std::string fprime_test;
};

inline BoundUsage bound_usage(const BetaLaw& law, std::size_t grid_size = stein_default_grid)
{
    const BoundConstants c = bound_constants(law.alpha, law.beta);
    BoundUsage out;
    for (const auto& h : lipschitz::standard_family()) {
        const SupNorms s = sup_norms(solve_stein(law, h, grid_size));
        const double f_ratio = s.f_sup / (2.0 / (law.alpha + law.beta) * h.hprime_sup);
        const double fprime_ratio = s.fprime_sup / ((c.b0 + c.b1) * h.hprime_sup);
        if (f_ratio > out.f_ratio) {
            out.f_ratio = f_ratio;
            out.f_test = h.name;
        }
        if (fprime_ratio > out.fprime_ratio) {
            out.fprime_ratio = fprime_ratio;
            out.fprime_test = h.name;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Monotonicity of g(w) = w^(alpha-1) (1-w)^(beta-1)

enum class Monotonicity {
    increasing,
    decreasing,
    constant,
    decreasing_then_increasing,
    increasing_then_decreasing,
};

inline const char* to_string(Monotonicity m) noexcept
{
    switch (m) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    case Monotonicity::constant: return "constant";
    case Monotonicity::decreasing_then_increasing: return "decreasing-then-increasing";
    case Monotonicity::increasing_then_decreasing: return "increasing-then-decreasing";
    }
    return "?";
}

struct MonotonicityClass {
    Monotonicity shape = Monotonicity::constant;
    std::optional<double> turning_point; ///< (alpha - 1) / (alpha + beta - 2) for the two-piece shapes
};

/// Stationary point (alpha - 1) / (alpha + beta - 2).
inline double stationary_point(double alpha, double beta) { return (alpha - 1.0) / (alpha + beta - 2.0); }

inline MonotonicityClass monotonicity_classify(double alpha, double beta)
{
    if (!(alpha > -1.0 && beta > -1.0)) {
        detail::fail_domain("monotonicity_classify", "alpha and beta must exceed -1");
    }
    if (alpha < 1.0) {
        if (beta < 1.0) {
            return {Monotonicity::decreasing_then_increasing, stationary_point(alpha, beta)};
        }
        return {Monotonicity::decreasing, std::nullopt};
    }
    if (alpha == 1.0) {
        if (beta < 1.0) {
            return {Monotonicity::increasing, std::nullopt};
        }
        if (beta == 1.0) {
            return {Monotonicity::constant, std::nullopt};
        }
        return {Monotonicity::decreasing, std::nullopt};
    }
    if (beta <= 1.0) {
        return {Monotonicity::increasing, std::nullopt};
    }
    return {Monotonicity::increasing_then_decreasing, stationary_point(alpha, beta)};
}

} // namespace steinbeta
