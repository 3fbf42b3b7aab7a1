#pragma once

// The Polya-Eggenberger urn count S_n (beta-binomial) and the last zero L_2n
// of a simple symmetric walk, exactly and by simulation, next to their Beta
// limits.

#include "steinbeta/discrete_law.hpp"
#include "steinbeta/errors.hpp"
#include "steinbeta/special_functions.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace steinbeta {

/// Beta(alpha, beta) on [0, 1].
struct BetaLaw {
    PositiveReal alpha;
    PositiveReal beta;

    [[nodiscard]] double mean() const noexcept { return alpha / (alpha + beta); }
    [[nodiscard]] double log_normalizer() const { return log_beta(alpha, beta); }
};

/// Urn with `alpha` white and `beta` black balls initially; each draw returns
/// the ball together with `m` more of its colour; `n` draws in total.
struct UrnParams {
    std::int64_t alpha = 1;
    std::int64_t beta = 1;
    std::int64_t m = 1;
    std::int64_t n = 1;

    void validate() const
    {
        const std::pair<const char*, std::int64_t> fields[] = {{"alpha", alpha}, {"beta", beta}, {"m", m}, {"n", n}};
        for (const auto& [name, value] : fields) {
            if (value < 1) {
                detail::fail_domain("UrnParams", std::string(name) + " must be >= 1, got " + std::to_string(value));
            }
        }
    }

    /// Shape parameters of the limiting law, alpha/m and beta/m.
    [[nodiscard]] BetaLaw limit_law() const
    {
        return {static_cast<double>(alpha) / static_cast<double>(m), static_cast<double>(beta) / static_cast<double>(m)};
    }
};

/// Simple symmetric random walk of length 2n.
struct WalkParams {
    std::int64_t n = 1;

    void validate() const
    {
        if (n < 1) {
            detail::fail_domain("WalkParams", "n must be >= 1, got " + std::to_string(n));
        }
    }
};

/// The Arcsine law Beta(1/2, 1/2).
inline BetaLaw arcsine_law() { return {0.5, 0.5}; }

inline double beta_pdf(const BetaLaw& law, double x)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        return 0.0;
    }
    const double a = law.alpha;
    const double b = law.beta;
    const double lb = law.log_normalizer();
    // Endpoint values follow the limit of the density formula.
    auto endpoint = [lb](double exponent) {
        if (exponent < 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        return exponent > 0.0 ? 0.0 : std::exp(-lb);
    };
    if (x == 0.0) {
        return endpoint(a - 1.0);
    }
    if (x == 1.0) {
        return endpoint(b - 1.0);
    }
    return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lb);
}

inline double beta_cdf(const BetaLaw& law, double x)
{
    if (!(x > 0.0)) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    return regularized_incomplete_beta(x, law.alpha, law.beta);
}

/// E[Z^a (1 - Z)^b] = B(alpha + a, beta + b) / B(alpha, beta).
inline double beta_mixed_moment(const BetaLaw& law, std::int64_t a, std::int64_t b)
{
    if (a < 0 || b < 0) {
        detail::fail_domain("beta_mixed_moment", "exponents must be >= 0");
    }
    if (a == 0 && b == 0) {
        return 1.0;
    }
    return std::exp(log_beta(law.alpha + static_cast<double>(a), law.beta + static_cast<double>(b))
                    - log_beta(law.alpha, law.beta));
}

/// Law of S_n on {0, ..., n}, scale n:
///   p_k = C(n, k) (alpha/m)_k (beta/m)_{n-k} / (alpha/m + beta/m)_n.
///
/// The closed form fixes the log mass at the mode, summed term by term as
///   ln p_0 = sum_j ln(1 - a / (a + b + j)),  ln p_{k+1} = ln p_k + ln r_k,
///   r_k = (n - k)(a + k) / ((k + 1)(b + n - k - 1)).
/// The remaining masses follow from the ratios r_k, so neighbouring masses
/// agree with the exact ratio to a few ulp. Forming the masses from lgamma
/// differences instead costs about ulp(ln n!) in every ratio, which is
/// 1e-12 by n = 1000.
inline DiscreteLaw urn_pmf(const UrnParams& params)
{
    params.validate();
    const BetaLaw lim = params.limit_law();
    const double a = lim.alpha;
    const double b = lim.beta;
    const std::int64_t n = params.n;
    const double nd = static_cast<double>(n);
    auto ratio = [&](std::int64_t k) {
        const double kd = static_cast<double>(k);
        return ((nd - kd) * (a + kd)) / ((kd + 1.0) * (b + nd - kd - 1.0));
    };

    std::int64_t mode = 0;
    while (mode < n && ratio(mode) > 1.0) {
        ++mode;
    }
    KahanSum anchor;
    for (std::int64_t j = 0; j < n; ++j) {
        anchor += std::log1p(-a / (a + b + static_cast<double>(j)));
    }
    for (std::int64_t j = 0; j < mode; ++j) {
        anchor += std::log(ratio(j));
    }

    const auto size = static_cast<std::size_t>(n + 1);
    std::vector<double> masses(size);
    std::vector<double> logs(size);
    const auto at = [](std::int64_t k) { return static_cast<std::size_t>(k); };
    masses[at(mode)] = std::exp(anchor.value());
    logs[at(mode)] = anchor.value();
    KahanSum up = anchor;
    for (std::int64_t k = mode; k < n; ++k) {
        const double r = ratio(k);
        up += std::log(r);
        masses[at(k + 1)] = masses[at(k)] * r;
        logs[at(k + 1)] = up.value();
    }
    KahanSum down = anchor;
    for (std::int64_t k = mode; k > 0; --k) {
        const double r = ratio(k - 1);
        down += -std::log(r);
        masses[at(k - 1)] = masses[at(k)] / r;
        logs[at(k - 1)] = down.value();
    }
    return DiscreteLaw::from_mass_table(0, std::move(masses), std::move(logs), nd);
}

/// E([S_n]_a [n - S_n]_b) = [n]_{a+b} (alpha/m)_a (beta/m)_b / (alpha/m + beta/m)_{a+b},
/// exactly zero when a + b > n.
inline double urn_factorial_moment(const UrnParams& params, std::int64_t a, std::int64_t b)
{
    params.validate();
    if (a < 0 || b < 0) {
        detail::fail_domain("urn_factorial_moment", "a and b must be >= 0");
    }
    const SignedLog head = log_falling_factorial(static_cast<double>(params.n), a + b);
    if (head.is_zero()) {
        return 0.0;
    }
    const BetaLaw lim = params.limit_law();
    return std::exp(head.log_abs + log_rising_factorial(lim.alpha, a) + log_rising_factorial(lim.beta, b)
                    - log_rising_factorial(lim.alpha + lim.beta, a + b));
}

/// ln u_{2j} for j = 0..n, where u_{2j} = 2^{-2j} C(2j, j) = P(T_{2j} = 0).
inline std::vector<double> log_return_probabilities(std::int64_t n)
{
    std::vector<double> lu(static_cast<std::size_t>(n + 1));
    lu[0] = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
        // u_{2j+2} / u_{2j} = (2j + 1) / (2j + 2)
        lu[static_cast<std::size_t>(j + 1)] =
            lu[static_cast<std::size_t>(j)] + std::log1p(-1.0 / (2.0 * static_cast<double>(j) + 2.0));
    }
    return lu;
}

/// Law of L_2n / 2 on {0, ..., n}: P(L_2n = 2k) = u_{2k} u_{2n-2k}.
/// The scale is n, so index k sits at L_2n / (2n) = k / n.
inline DiscreteLaw walk_pmf(const WalkParams& params)
{
    params.validate();
    const auto lu = log_return_probabilities(params.n);
    std::vector<double> logs(lu.size());
    for (std::size_t k = 0; k < lu.size(); ++k) {
        logs[k] = lu[k] + lu[lu.size() - 1 - k];
    }
    return DiscreteLaw::from_log_masses(0, std::move(logs), static_cast<double>(params.n));
}

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline DiscreteLaw empirical_law(const std::vector<std::int64_t>& counts, std::int64_t draws, double scale)
{
    std::vector<double> masses(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        masses[i] = static_cast<double>(counts[i]) / static_cast<double>(draws);
    }
    return DiscreteLaw::from_masses(0, std::move(masses), scale);
}

} // namespace detail

/// Runs the urn process `draws` times and returns empirical frequencies of
/// S_n. Reproducible for a fixed seed.
inline DiscreteLaw simulate_urn(const UrnParams& params, std::int64_t draws, std::uint64_t seed)
{
    params.validate();
    if (draws < 1) {
        detail::fail_domain("simulate_urn", "draws must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(params.n + 1), 0);
    for (std::int64_t d = 0; d < draws; ++d) {
        std::int64_t white = params.alpha;
        std::int64_t black = params.beta;
        std::int64_t drawn_white = 0;
        for (std::int64_t step = 0; step < params.n; ++step) {
            const double total = static_cast<double>(white + black);
            if (detail::unit_uniform(rng) * total < static_cast<double>(white)) {
                white += params.m;
                ++drawn_white;
            } else {
                black += params.m;
            }
        }
        ++counts[static_cast<std::size_t>(drawn_white)];
    }
    return detail::empirical_law(counts, draws, static_cast<double>(params.n));
}

/// Simulates `draws` walks of length 2n and returns the empirical law of
/// L_2n / 2 (same indexing as walk_pmf).
inline DiscreteLaw simulate_walk_L(const WalkParams& params, std::int64_t draws, std::uint64_t seed)
{
    params.validate();
    if (draws < 1) {
        detail::fail_domain("simulate_walk_L", "draws must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(params.n + 1), 0);
    const std::int64_t length = 2 * params.n;
    for (std::int64_t d = 0; d < draws; ++d) {
        std::int64_t position = 0;
        std::int64_t last_zero = 0;
        std::uint64_t bits = 0;
        int bits_left = 0;
        for (std::int64_t t = 1; t <= length; ++t) {
            if (bits_left == 0) {
                bits = rng();
                bits_left = 64;
            }
            position += (bits & 1U) ? 1 : -1;
            bits >>= 1U;
            --bits_left;
            if (position == 0) {
                last_zero = t;
            }
        }
        ++counts[static_cast<std::size_t>(last_zero / 2)];
    }
    return detail::empirical_law(counts, draws, static_cast<double>(params.n));
}

} // namespace steinbeta
