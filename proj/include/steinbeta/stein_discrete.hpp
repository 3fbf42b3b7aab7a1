#pragma once

// Density-approach Stein operators for laws on a finite integer interval
// [a, b]. With psi(k) = (p(k+1) - p(k)) / p(k) the basic operator is
//   E[ Delta f(X - 1) + psi(X) f(X) ].
// The urn and walk operators are c-function transforms of it. Going the
// other way, psi determines p up to normalization.

#include "steinbeta/discrete_law.hpp"
#include "steinbeta/distributions.hpp"
#include "steinbeta/errors.hpp"
#include "steinbeta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace steinbeta {

/// psi(k) for k in {lo, ..., hi}.
struct PsiTable {
    std::int64_t lo = 0;
    std::vector<double> values;

    [[nodiscard]] std::int64_t hi() const noexcept { return lo + static_cast<std::int64_t>(values.size()) - 1; }
    [[nodiscard]] double operator()(std::int64_t k) const { return values.at(static_cast<std::size_t>(k - lo)); }
};

/// A test function on {lo - 1, ..., hi} that vanishes at lo - 1.
class TestFunction {
public:
    /// `values` covers lo - 1 .. hi; values.front() must be 0.
    TestFunction(std::int64_t lo, std::vector<double> values) : lo_(lo), values_(std::move(values))
    {
        if (values_.size() < 2) {
            detail::fail_domain("TestFunction", "needs values on at least {lo - 1, lo}");
        }
        if (values_.front() != 0.0) {
            detail::fail_domain("TestFunction", "f(lo - 1) must be 0");
        }
    }

    /// Samples g on lo..hi and sets f(lo - 1) = 0, i.e. f = g 1{k >= lo}.
    template <class G>
    static TestFunction on_support(std::int64_t lo, std::int64_t hi, const G& g)
    {
        std::vector<double> v(static_cast<std::size_t>(hi - lo + 2), 0.0);
        for (std::int64_t k = lo; k <= hi; ++k) {
            v[static_cast<std::size_t>(k - lo + 1)] = g(k);
        }
        return TestFunction(lo, std::move(v));
    }

    static TestFunction indicator(std::int64_t lo, std::int64_t hi, std::int64_t at, double height = 1.0)
    {
        return on_support(lo, hi, [at, height](std::int64_t k) { return k == at ? height : 0.0; });
    }

    [[nodiscard]] std::int64_t lo() const noexcept { return lo_; }
    [[nodiscard]] std::int64_t hi() const noexcept { return lo_ + static_cast<std::int64_t>(values_.size()) - 2; }

    [[nodiscard]] double operator()(std::int64_t k) const
    {
        return values_.at(static_cast<std::size_t>(k - lo_ + 1));
    }

    /// Forward difference f(k + 1) - f(k).
    [[nodiscard]] double delta(std::int64_t k) const { return (*this)(k + 1) - (*this)(k); }

private:
    std::int64_t lo_;
    std::vector<double> values_;
};

/// Values of c on {lo - 1, ..., hi}.
struct CFunction {
    std::int64_t lo = 0;
    std::vector<double> values;

    [[nodiscard]] std::int64_t hi() const noexcept { return lo + static_cast<std::int64_t>(values.size()) - 2; }
    [[nodiscard]] double operator()(std::int64_t k) const { return values.at(static_cast<std::size_t>(k - lo + 1)); }
};

/// psi(k) = Delta p(k) / p(k), with p(hi + 1) = 0 so psi(hi) = -1.
inline PsiTable psi_of(const DiscreteLaw& law)
{
    PsiTable out{law.support_lo(), std::vector<double>(law.size())};
    for (std::int64_t k = law.support_lo(); k <= law.support_hi(); ++k) {
        if (!(law.mass(k) > 0.0)) {
            detail::fail_domain("psi_of", "zero mass at k=" + std::to_string(k) + "; psi undefined");
        }
    }
    for (std::int64_t k = law.support_lo(); k < law.support_hi(); ++k) {
        out.values[static_cast<std::size_t>(k - out.lo)] = std::expm1(law.log_mass(k + 1) - law.log_mass(k));
    }
    out.values.back() = -1.0;
    return out;
}

/// psi of the urn law in closed form.
inline PsiTable urn_psi(const UrnParams& params)
{
    params.validate();
    const BetaLaw lim = params.limit_law();
    const double a = lim.alpha;
    const double b = lim.beta;
    const double n = static_cast<double>(params.n);
    PsiTable out{0, std::vector<double>(static_cast<std::size_t>(params.n + 1))};
    for (std::int64_t k = 0; k < params.n; ++k) {
        const double kd = static_cast<double>(k);
        const double denom = (kd + 1.0) * (b + n - kd - 1.0);
        out.values[static_cast<std::size_t>(k)] = ((n - kd) * (a + kd) - denom) / denom;
    }
    out.values.back() = -1.0;
    return out;
}

/// psi of the law of L_2n / 2 in closed form: (2k - n + 1) / ((k + 1)(2(n - k) - 1)).
inline PsiTable walk_psi(const WalkParams& params)
{
    params.validate();
    const double n = static_cast<double>(params.n);
    PsiTable out{0, std::vector<double>(static_cast<std::size_t>(params.n + 1))};
    for (std::int64_t k = 0; k < params.n; ++k) {
        const double kd = static_cast<double>(k);
        out.values[static_cast<std::size_t>(k)] = (2.0 * kd - n + 1.0) / ((kd + 1.0) * (2.0 * (n - kd) - 1.0));
    }
    out.values.back() = -1.0;
    return out;
}

namespace detail {

inline void check_same_support(const DiscreteLaw& law, std::int64_t lo, std::int64_t hi, const char* what)
{
    if (law.support_lo() != lo || law.support_hi() != hi) {
        fail_domain(what, "mismatched supports: law on [" + std::to_string(law.support_lo()) + ", "
                              + std::to_string(law.support_hi()) + "], argument on [" + std::to_string(lo) + ", "
                              + std::to_string(hi) + "]");
    }
}

} // namespace detail

/// sum_k p(k) [ Delta f(k - 1) + psi(k) f(k) ], ascending k, compensated.
/// Zero (up to rounding) when `psi` is the psi of `law`.
inline double density_operator_expectation(const DiscreteLaw& law, const PsiTable& psi, const TestFunction& f)
{
    detail::check_same_support(law, psi.lo, psi.hi(), "density_operator_expectation");
    detail::check_same_support(law, f.lo(), f.hi(), "density_operator_expectation");
    KahanSum acc;
    for (std::int64_t k = law.support_lo(); k <= law.support_hi(); ++k) {
        acc += law.mass(k) * (f.delta(k - 1) + psi(k) * f(k));
    }
    return acc.value();
}

inline double density_operator_expectation(const DiscreteLaw& law, const TestFunction& f)
{
    return density_operator_expectation(law, psi_of(law), f);
}

/// sum_k p(k) [ c(k-1) Delta f(k-1) + (c(k) psi(k) + c(k) - c(k-1)) f(k) ].
///
/// c must be nonzero on {lo, ..., hi - 1}, and at hi unless psi(hi) = -1.
/// c(lo - 1) cancels algebraically because f(lo - 1) = 0, so it may take any value.
inline double c_transformed_expectation(const DiscreteLaw& law, const PsiTable& psi, const CFunction& c,
                                        const TestFunction& f)
{
    detail::check_same_support(law, psi.lo, psi.hi(), "c_transformed_expectation");
    detail::check_same_support(law, f.lo(), f.hi(), "c_transformed_expectation");
    detail::check_same_support(law, c.lo, c.hi(), "c_transformed_expectation");
    for (std::int64_t k = law.support_lo(); k <= law.support_hi(); ++k) {
        const bool free_top = (k == law.support_hi() && psi(k) == -1.0);
        if (!free_top && c(k) == 0.0) {
            detail::fail_domain("c_transformed_expectation", "c vanishes at required index k=" + std::to_string(k));
        }
    }
    KahanSum acc;
    for (std::int64_t k = law.support_lo(); k <= law.support_hi(); ++k) {
        acc += law.mass(k) * (c(k - 1) * f.delta(k - 1) + (c(k) * psi(k) + (c(k) - c(k - 1))) * f(k));
    }
    return acc.value();
}

/// The c-function that turns the density operator into the urn operator:
/// c(k) = (k + 1)(beta/m + n - k - 1) for k < n, c(n) = n.
inline CFunction urn_c_function(const UrnParams& params)
{
    params.validate();
    const double b = params.limit_law().beta;
    const double n = static_cast<double>(params.n);
    CFunction c{0, std::vector<double>(static_cast<std::size_t>(params.n + 2))};
    for (std::int64_t k = -1; k < params.n; ++k) {
        const double kd = static_cast<double>(k);
        c.values[static_cast<std::size_t>(k + 1)] = (kd + 1.0) * (b + n - kd - 1.0);
    }
    c.values.back() = n;
    return c;
}

/// c(k) = (k + 1)(2(n - k) - 1), which maps the walk density operator onto
/// 2n times the scaled walk operator.
inline CFunction walk_c_function(const WalkParams& params)
{
    params.validate();
    const double n = static_cast<double>(params.n);
    CFunction c{0, std::vector<double>(static_cast<std::size_t>(params.n + 2))};
    for (std::int64_t k = -1; k <= params.n; ++k) {
        const double kd = static_cast<double>(k);
        c.values[static_cast<std::size_t>(k + 1)] = (kd + 1.0) * (2.0 * (n - kd) - 1.0);
    }
    return c;
}

/// E[ S(beta/m + n - S) Delta f(S - 1) + {(n - S)(alpha/m + S) - S(beta/m + n - S)} f(S) ]
/// under the urn law.
inline double urn_operator_expectation(const UrnParams& params, const TestFunction& f)
{
    const DiscreteLaw law = urn_pmf(params);
    detail::check_same_support(law, f.lo(), f.hi(), "urn_operator_expectation");
    const BetaLaw lim = params.limit_law();
    const double a = lim.alpha;
    const double b = lim.beta;
    const double n = static_cast<double>(params.n);
    KahanSum acc;
    for (std::int64_t k = 0; k <= params.n; ++k) {
        const double s = static_cast<double>(k);
        const double down = s * (b + n - s);
        acc += law.mass(k) * (down * f.delta(k - 1) + ((n - s) * (a + s) - down) * f(k));
    }
    return acc.value();
}

/// E[ n W (1 - W + 1/(2n)) Delta_{1/n} f(W - 1/n) + (1/2 - W) f(W) ] with
/// W = L_2n / (2n). f is sampled on {0, 1/n, ..., 1}; f(-1/n) is taken as 0.
inline double walk_operator_expectation(const WalkParams& params, const std::function<double(double)>& f)
{
    const DiscreteLaw law = walk_pmf(params);
    const double n = static_cast<double>(params.n);
    KahanSum acc;
    double previous = 0.0;
    for (std::int64_t k = 0; k <= params.n; ++k) {
        const double w = static_cast<double>(k) / n;
        const double current = f(w);
        acc += law.mass(k) * (n * w * (1.0 - w + 0.5 / n) * (current - previous) + (0.5 - w) * current);
        previous = current;
    }
    return acc.value();
}

/// The law with p(k + 1) / p(k) = 1 + psi(k), normalized. Requires
/// psi(k) > -1 below the top of the support and psi(hi) = -1.
inline DiscreteLaw reconstruct_pmf(const PsiTable& psi, double scale)
{
    if (psi.values.empty()) {
        detail::fail_domain("reconstruct_pmf", "empty psi table");
    }
    if (std::abs(psi.values.back() + 1.0) > 1e-12) {
        detail::fail_domain("reconstruct_pmf", "psi at the top of the support must be -1");
    }
    std::vector<double> logs(psi.values.size());
    logs[0] = 0.0;
    for (std::size_t i = 0; i + 1 < psi.values.size(); ++i) {
        if (!(psi.values[i] > -1.0)) {
            detail::fail_domain("reconstruct_pmf",
                                "psi(" + std::to_string(psi.lo + static_cast<std::int64_t>(i)) + ") <= -1");
        }
        logs[i + 1] = logs[i] + std::log1p(psi.values[i]);
    }
    double peak = -std::numeric_limits<double>::infinity();
    for (double l : logs) {
        peak = std::max(peak, l);
    }
    KahanSum total;
    for (double l : logs) {
        total += std::exp(l - peak);
    }
    const double log_total = peak + std::log(total.value());
    for (double& l : logs) {
        l -= log_total;
    }
    return DiscreteLaw::from_log_masses(psi.lo, std::move(logs), scale);
}

} // namespace steinbeta
