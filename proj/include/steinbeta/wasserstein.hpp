#pragma once

// Exact Wasserstein distance between a lattice law on [0, 1] and a Beta law,
// and the explicit upper and lower bounds it is compared against.

#include "steinbeta/discrete_law.hpp"
#include "steinbeta/distributions.hpp"
#include "steinbeta/errors.hpp"
#include "steinbeta/quadrature.hpp"
#include "steinbeta/special_functions.hpp"
#include "steinbeta/stein_beta.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace steinbeta {

/// int_0^t I_x(a, b) dx = t I_t(a, b) - a / (a + b) I_t(a + 1, b).
inline double beta_cdf_integral(double t, PositiveReal a, PositiveReal b)
{
    if (!(t >= 0.0 && t <= 1.0)) {
        detail::fail_domain("beta_cdf_integral", "t must lie in [0, 1]");
    }
    return t * regularized_incomplete_beta(t, a, b)
           - a / (a + b) * regularized_incomplete_beta(t, a.value() + 1.0, b);
}

namespace detail {

inline void check_unit_support(const DiscreteLaw& law, const char* where)
{
    const double lo = law.position(law.support_lo());
    const double hi = law.position(law.support_hi());
    if (lo < 0.0 || hi > 1.0) {
        fail_domain(where, "scaled support [" + std::to_string(lo) + ", " + std::to_string(hi)
                               + "] is not inside [0, 1]");
    }
}

} // namespace detail

/// d_W(law, target) = int_0^1 |F_law(x) - I_x(alpha, beta)| dx.
///
/// The discrete CDF is constant on each cell between consecutive support
/// points. The Beta CDF is strictly increasing, so it crosses that constant at
/// most once per cell; the crossing comes from beta_quantile and each side is
/// integrated in closed form with beta_cdf_integral.
inline double wasserstein_exact(const DiscreteLaw& law, const BetaLaw& target)
{
    detail::check_unit_support(law, "wasserstein_exact");
    const double a = target.alpha;
    const double b = target.beta;
    auto cdf = [&](double x) { return regularized_incomplete_beta(x, a, b); };
    auto antiderivative = [&](double x) { return beta_cdf_integral(x, a, b); };

    KahanSum distance;
    auto cell = [&](double l, double r, double level) {
        if (!(r > l)) {
            return;
        }
        const double il = cdf(l);
        const double ir = cdf(r);
        const double al = antiderivative(l);
        const double ar = antiderivative(r);
        if (level <= il) {
            distance += (ar - al) - level * (r - l);
        } else if (level >= ir) {
            distance += level * (r - l) - (ar - al);
        } else {
            const double t = std::clamp(beta_quantile(level, a, b), l, r);
            const double at = antiderivative(t);
            distance += level * (t - l) - (at - al);
            distance += (ar - at) - level * (r - t);
        }
    };

    KahanSum cumulative;
    double left = 0.0;
    double level = 0.0;
    for (std::int64_t k = law.support_lo(); k <= law.support_hi(); ++k) {
        const double x = law.position(k);
        cell(left, x, level);
        cumulative += law.mass(k);
        level = std::min(cumulative.value(), 1.0);
        left = x;
    }
    cell(left, 1.0, 1.0);
    return distance.value();
}

/// Stratified Monte Carlo estimate of int_0^1 |F_law(x) - I_x| dx: one
/// uniform point in each of `points` equal cells. Independent of the
/// crossing-point construction used by wasserstein_exact.
inline double wasserstein_grid_estimate(const DiscreteLaw& law, const BetaLaw& target, std::int64_t points,
                                        std::uint64_t seed)
{
    detail::check_unit_support(law, "wasserstein_grid_estimate");
    if (points < 1) {
        detail::fail_domain("wasserstein_grid_estimate", "points must be >= 1");
    }
    std::mt19937_64 rng(seed);
    KahanSum acc;
    KahanSum cumulative;
    std::int64_t next = law.support_lo();
    const double width = 1.0 / static_cast<double>(points);
    for (std::int64_t i = 0; i < points; ++i) {
        const double x = (static_cast<double>(i) + detail::unit_uniform(rng)) * width;
        while (next <= law.support_hi() && law.position(next) <= x) {
            cumulative += law.mass(next);
            ++next;
        }
        const double level = next > law.support_hi() ? 1.0 : cumulative.value();
        acc += std::abs(level - regularized_incomplete_beta(x, target.alpha, target.beta));
    }
    return acc.value() * width;
}

/// |E h(W) - E h(Z)| with W the scaled lattice law and Z ~ target.
inline double expectation_gap(const DiscreteLaw& law, const BetaLaw& target, const LipschitzTest& test)
{
    return std::abs(law.expect_scaled(test.h) - beta_expectation(target, test));
}

/// ((m + max(alpha, beta)) / (2nm) + alpha beta / (nm (alpha + beta))) (b0 + b1) + 3 / (2n),
/// with b0, b1 evaluated at (alpha/m, beta/m).
inline double urn_upper_bound(const UrnParams& params)
{
    params.validate();
    const double a = static_cast<double>(params.alpha);
    const double b = static_cast<double>(params.beta);
    const double m = static_cast<double>(params.m);
    const double n = static_cast<double>(params.n);
    const BoundConstants c = bound_constants(a / m, b / m);
    return ((m + std::max(a, b)) / (2.0 * n * m) + a * b / (n * m * (a + b))) * (c.b0 + c.b1) + 3.0 / (2.0 * n);
}

/// alpha beta / (n (alpha + beta + m)(alpha + beta)); equals |E h(W_n) - E h(Z)| for h(x) = x(1 - x).
inline double urn_lower_bound(const UrnParams& params)
{
    params.validate();
    const double a = static_cast<double>(params.alpha);
    const double b = static_cast<double>(params.beta);
    const double m = static_cast<double>(params.m);
    const double n = static_cast<double>(params.n);
    return a * b / (n * (a + b + m) * (a + b));
}

/// 27 / (2n) + 8 / n^2.
inline double arcsine_upper_bound(const WalkParams& params)
{
    params.validate();
    const double n = static_cast<double>(params.n);
    return 27.0 / (2.0 * n) + 8.0 / (n * n);
}

/// E f(W_n) - E f(Z) for f(w) = w^2 / 2, W_n = L_2n / (2n), Z Arcsine.
/// Equal to 1 / (16 n).
inline double arcsine_moment_gap(const WalkParams& params)
{
    const DiscreteLaw law = walk_pmf(params);
    const double second = law.expect_scaled([](double w) { return w * w; });
    return 0.5 * second - 0.5 * beta_mixed_moment(arcsine_law(), 2, 0);
}

// ---------------------------------------------------------------------------
// Reports and sweeps

struct UrnFamily {
    std::int64_t alpha = 1;
    std::int64_t beta = 1;
    std::int64_t m = 1;
};

struct WalkFamily {};

using Family = std::variant<UrnFamily, WalkFamily>;

struct DistanceReport {
    std::int64_t n = 0;
    double exact_dw = 0.0;
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    std::optional<double> mc_estimate;
    std::variant<UrnParams, WalkParams> params;

    [[nodiscard]] bool sandwiched(double slack = 1e-9) const noexcept
    {
        return lower_bound <= exact_dw + slack && exact_dw <= upper_bound + slack;
    }
};

inline DistanceReport urn_distance_report(const UrnParams& params)
{
    const DiscreteLaw law = urn_pmf(params);
    DistanceReport r;
    r.n = params.n;
    r.exact_dw = wasserstein_exact(law, params.limit_law());
    r.upper_bound = urn_upper_bound(params);
    r.lower_bound = urn_lower_bound(params);
    r.params = params;
    return r;
}

/// The lower bound reported for the walk is the w^2/2 witness gap 1/(16n).
inline DistanceReport walk_distance_report(const WalkParams& params)
{
    const DiscreteLaw law = walk_pmf(params);
    DistanceReport r;
    r.n = params.n;
    r.exact_dw = wasserstein_exact(law, arcsine_law());
    r.upper_bound = arcsine_upper_bound(params);
    r.lower_bound = std::abs(arcsine_moment_gap(params));
    r.params = params;
    return r;
}

inline DistanceReport distance_report(const Family& family, std::int64_t n)
{
    if (const auto* urn = std::get_if<UrnFamily>(&family)) {
        return urn_distance_report(UrnParams{urn->alpha, urn->beta, urn->m, n});
    }
    return walk_distance_report(WalkParams{n});
}

struct RateRow {
    std::int64_t n = 0;
    double dw = 0.0;
    double n_dw = 0.0;
    double upper = 0.0;
    double lower = 0.0;
};

/// One row per n, in input order. Rows are computed on `threads` workers
/// (0 means hardware concurrency).
inline std::vector<RateRow> rate_table(const Family& family, const std::vector<std::int64_t>& n_values,
                                       unsigned threads = 0)
{
    if (n_values.empty()) {
        detail::fail_domain("rate_table", "n_values must be nonempty");
    }
    for (std::size_t i = 1; i < n_values.size(); ++i) {
        if (n_values[i] <= n_values[i - 1]) {
            detail::fail_domain("rate_table", "n_values must be strictly increasing");
        }
    }
    std::vector<RateRow> rows(n_values.size());
    auto compute = [&](std::size_t i) {
        const DistanceReport r = distance_report(family, n_values[i]);
        rows[i] = {r.n, r.exact_dw, static_cast<double>(r.n) * r.exact_dw, r.upper_bound, r.lower_bound};
    };

    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n_values.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            compute(i);
        }
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n_values.size(); i = next++) {
                try {
                    compute(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return rows;
}

} // namespace steinbeta
