#pragma once

// Invariant suites run by `steinbeta verify`. Each check reports a residual
// and passes when it is at most the check's tolerance. For equalities the
// residual is the largest absolute (or relative) error; for inequalities
// lhs <= rhs it is the largest lhs - rhs, which is negative when there is
// room to spare.

#include "steinbeta/distributions.hpp"
#include "steinbeta/special_functions.hpp"
#include "steinbeta/stein_beta.hpp"
#include "steinbeta/stein_discrete.hpp"
#include "steinbeta/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace steinbeta::verify {

struct Check {
    std::string suite;
    std::string check;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"special_functions", "distributions", "stein_discrete", "stein_beta",
                                                "wasserstein"};
    return names;
}

namespace detail {

class Recorder {
public:
    Recorder(std::string suite, std::vector<Check>& out) : suite_(std::move(suite)), out_(out) {}

    void record(const std::string& name, double residual, double tolerance)
    {
        out_.push_back({suite_, name, residual, tolerance, residual <= tolerance});
    }

private:
    std::string suite_;
    std::vector<Check>& out_;
};

inline double falling(double x, std::int64_t k)
{
    double r = 1.0;
    for (std::int64_t i = 0; i < k; ++i) {
        r *= x - static_cast<double>(i);
    }
    return r;
}

inline void special_functions_suite(std::vector<Check>& out, std::uint64_t seed)
{
    Recorder r("special_functions", out);
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * steinbeta::detail::unit_uniform(rng); };

    double spot = std::abs(log_gamma(1.0));
    spot = std::max(spot, std::abs(log_gamma(0.5) - 0.5 * std::log(std::numbers::pi)));
    spot = std::max(spot, std::abs(log_gamma(10.0) - std::log(362880.0)) / std::log(362880.0));
    r.record("log_gamma_spot_values", spot, 1e-13);

    double recurrence = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double x = std::pow(10.0, uniform(-3.0, 5.0));
        const double lg = log_gamma(x);
        recurrence =
            std::max(recurrence, std::abs(log_gamma(x + 1.0) - lg - std::log(x)) / (1.0 + std::abs(lg)));
    }
    r.record("log_gamma_recurrence", recurrence, 1e-13);

    double symmetry = 0.0;
    double split = 0.0;
    for (int i = 0; i < 300; ++i) {
        const double a = uniform(0.01, 50.0);
        const double b = uniform(0.01, 50.0);
        symmetry = std::max(symmetry, std::abs(log_beta(a, b) - log_beta(b, a)));
        const auto k = static_cast<std::int64_t>(uniform(0.0, 40.0));
        const auto j = static_cast<std::int64_t>(uniform(0.0, 40.0));
        const double lhs = std::exp(log_rising_factorial(a, k) + log_rising_factorial(a + static_cast<double>(k), j));
        const double rhs = std::exp(log_rising_factorial(a, k + j));
        split = std::max(split, std::abs(lhs - rhs) / rhs);
    }
    r.record("log_beta_symmetry", symmetry, 0.0);
    r.record("rising_factorial_split", split, 1e-12);

    double reflection = 0.0;
    double monotone = 0.0;
    double roundtrip = 0.0;
    double inverse = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const double a = uniform(0.05, 10.0);
        const double b = uniform(0.05, 10.0);
        double previous = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = i / 1000.0;
            const double v = regularized_incomplete_beta(x, a, b);
            reflection = std::max(reflection, std::abs(v + regularized_incomplete_beta(1.0 - x, b, a) - 1.0));
            monotone = std::max(monotone, previous - v);
            previous = v;
            if (i < 1000) {
                const double mid = (i + 0.5) / 1000.0;
                const double p = regularized_incomplete_beta(mid, a, b);
                const double q = beta_quantile(p, a, b);
                // ulp(p) / density bounds how well x is determined by p at all.
                if (beta_pdf({a, b}, mid) >= 1e-5) {
                    roundtrip = std::max(roundtrip, std::abs(q - mid));
                }
                inverse = std::max(inverse, std::abs(regularized_incomplete_beta(q, a, b) - p));
            }
        }
    }
    r.record("incomplete_beta_reflection", reflection, 1e-12);
    r.record("incomplete_beta_monotone", monotone, 0.0);
    r.record("quantile_roundtrip_x", roundtrip, 1e-10);
    r.record("quantile_roundtrip_p", inverse, 1e-12);
}

inline void distributions_suite(std::vector<Check>& out)
{
    Recorder r("distributions", out);
    double urn_sum = 0.0;
    for (std::int64_t a : {1, 2, 3, 7}) {
        for (std::int64_t b : {1, 2, 3, 7}) {
            for (std::int64_t m : {1, 2, 3, 7}) {
                for (std::int64_t n = 1; n <= 200; ++n) {
                    urn_sum = std::max(urn_sum, std::abs(urn_pmf({a, b, m, n}).normalization_deviation()));
                }
            }
        }
    }
    r.record("urn_pmf_raw_sum", urn_sum, 1e-10);

    double factorial = 0.0;
    double ratio = 0.0;
    for (std::int64_t a : {1, 2, 3}) {
        for (std::int64_t b : {1, 2, 3}) {
            for (std::int64_t m : {1, 2, 3}) {
                for (std::int64_t n : {1, 2, 5, 10, 50, 100}) {
                    const UrnParams p{a, b, m, n};
                    const DiscreteLaw law = urn_pmf(p);
                    const double nd = static_cast<double>(n);
                    for (std::int64_t i = 0; i <= 6; ++i) {
                        for (std::int64_t j = 0; i + j <= 6 && i + j <= n; ++j) {
                            const double brute = law.expect_index([&](std::int64_t k) {
                                return falling(static_cast<double>(k), i) * falling(static_cast<double>(n - k), j);
                            });
                            factorial = std::max(factorial, std::abs(urn_factorial_moment(p, i, j) - brute) / brute);
                            const double scale = std::pow(nd, static_cast<double>(i + j));
                            const double rhs = falling(nd, i + j) / scale * beta_mixed_moment(p.limit_law(), i, j);
                            ratio = std::max(ratio, std::abs(brute / scale - rhs) / rhs);
                        }
                    }
                }
            }
        }
    }
    r.record("urn_factorial_moments", factorial, 1e-9);
    r.record("moment_ratio_identity", ratio, 1e-9);

    double walk_sum = 0.0;
    double first = 0.0;
    double second = 0.0;
    for (std::int64_t n = 1; n <= 2000; ++n) {
        const DiscreteLaw law = walk_pmf({n});
        walk_sum = std::max(walk_sum, std::abs(law.normalization_deviation()));
        first = std::max(first, std::abs(law.expect_scaled([](double w) { return w; }) - 0.5));
        second = std::max(second, std::abs(law.expect_scaled([](double w) { return w * w; }) - 0.375
                                           - 0.125 / static_cast<double>(n)));
    }
    r.record("walk_pmf_raw_sum", walk_sum, 1e-12);
    r.record("walk_first_moment", first, 1e-12);
    r.record("walk_second_moment", second, 1e-12);
}

inline void stein_discrete_suite(std::vector<Check>& out, std::uint64_t seed)
{
    Recorder r("stein_discrete", out);
    std::mt19937_64 rng(seed);
    auto random_f = [&rng](std::int64_t hi) {
        return TestFunction::on_support(0, hi,
                                        [&](std::int64_t) { return 2.0 * steinbeta::detail::unit_uniform(rng) - 1.0; });
    };

    double density = 0.0;
    double urn_op = 0.0;
    double equivalence = 0.0;
    double roundtrip = 0.0;
    for (std::int64_t a : {1, 2, 3}) {
        for (std::int64_t b : {1, 2, 3}) {
            for (std::int64_t m : {1, 2, 3}) {
                for (std::int64_t n : {1, 2, 5, 10, 50, 100, 500}) {
                    const UrnParams p{a, b, m, n};
                    const DiscreteLaw law = urn_pmf(p);
                    const PsiTable psi = psi_of(law);
                    const CFunction c = urn_c_function(p);
                    for (int t = 0; t < 50; ++t) {
                        const TestFunction f = random_f(n);
                        density = std::max(density, std::abs(density_operator_expectation(law, psi, f)));
                        const double direct = urn_operator_expectation(p, f);
                        urn_op = std::max(urn_op, std::abs(direct));
                        equivalence =
                            std::max(equivalence, std::abs(direct - c_transformed_expectation(law, psi, c, f)));
                    }
                    const DiscreteLaw back = reconstruct_pmf(psi, law.scale());
                    for (std::int64_t k = 0; k <= n; ++k) {
                        roundtrip = std::max(roundtrip, std::abs(back.mass(k) - law.mass(k)));
                    }
                }
            }
        }
    }

    double walk_op = 0.0;
    for (std::int64_t n : {1, 2, 5, 10, 50, 100, 500}) {
        const DiscreteLaw law = walk_pmf({n});
        for (int t = 0; t < 50; ++t) {
            std::vector<double> vals(static_cast<std::size_t>(n + 1));
            for (double& v : vals) {
                v = 2.0 * steinbeta::detail::unit_uniform(rng) - 1.0;
            }
            walk_op = std::max(walk_op, std::abs(walk_operator_expectation({n}, [&](double w) {
                                            return vals[static_cast<std::size_t>(std::llround(w * static_cast<double>(n)))];
                                        })));
        }
        const DiscreteLaw back = reconstruct_pmf(psi_of(law), law.scale());
        for (std::int64_t k = 0; k <= n; ++k) {
            roundtrip = std::max(roundtrip, std::abs(back.mass(k) - law.mass(k)));
        }
    }
    r.record("density_operator_vanishes", density, 1e-10);
    r.record("urn_operator_vanishes", urn_op, 1e-10);
    r.record("urn_operator_equals_c_transform", equivalence, 1e-11);
    r.record("walk_operator_vanishes", walk_op, 1e-10);
    r.record("reconstruct_roundtrip", roundtrip, 1e-10);

    // For every pair of distinct urn laws some indicator must separate them.
    // The residual is -(smallest best separation), so passing means > 1e-6.
    double weakest = std::numeric_limits<double>::infinity();
    std::vector<DiscreteLaw> laws;
    for (std::int64_t a : {1, 2, 3}) {
        for (std::int64_t b : {1, 2, 3}) {
            for (std::int64_t m : {1, 2, 3}) {
                laws.push_back(urn_pmf({a, b, m, 8}));
            }
        }
    }
    for (const auto& lp : laws) {
        for (const auto& lq : laws) {
            double gap = 0.0;
            for (std::int64_t k = 0; k <= 8; ++k) {
                gap = std::max(gap, std::abs(lp.mass(k) - lq.mass(k)));
            }
            if (gap < 1e-12) {
                continue;
            }
            const PsiTable psi = psi_of(lq);
            double best = 0.0;
            for (std::int64_t at = 0; at <= 8; ++at) {
                best = std::max(best,
                                std::abs(density_operator_expectation(lp, psi, TestFunction::indicator(0, 8, at))));
            }
            weakest = std::min(weakest, best);
        }
    }
    r.record("indicator_discriminates_urn_laws", -weakest, -1e-6);
}

inline void stein_beta_suite(std::vector<Check>& out, std::uint64_t seed, std::size_t grid_size)
{
    Recorder r("stein_beta", out);
    const auto family = lipschitz::standard_family();

    double f_dom = -std::numeric_limits<double>::infinity();
    double fp_dom = f_dom;
    double fp_dom_h = f_dom;
    double h_gap_dom = f_dom;
    double polynomial = 0.0;
    const double shapes[] = {0.2, 0.6, 1.0, 1.4, 2.0, 2.5, 3.2, 4.0};
    for (double a : shapes) {
        for (double b : shapes) {
            const BetaLaw law{a, b};
            const BoundConstants c = bound_constants(a, b);
            for (const auto& t : family) {
                const SteinSolution sol = solve_stein(law, t, grid_size);
                const SupNorms norms = sup_norms(sol);
                double h_gap = 0.0;
                for (double w : sol.grid) {
                    h_gap = std::max(h_gap, std::abs(t.h(w) - sol.bh));
                }
                f_dom = std::max(f_dom, norms.f_sup - 2.0 / (a + b) * t.hprime_sup);
                fp_dom = std::max(fp_dom, norms.fprime_sup - (c.b0 + c.b1) * t.hprime_sup);
                fp_dom_h = std::max(fp_dom_h, norms.fprime_sup - (c.b0 * h_gap + c.b1 * t.hprime_sup));
                h_gap_dom = std::max(h_gap_dom, h_gap - t.hprime_sup);
                if (t.name == "u") {
                    for (double f : sol.f_values) {
                        polynomial = std::max(polynomial, std::abs(f + 1.0 / (a + b)));
                    }
                }
            }
        }
    }
    r.record("f_sup_le_2_over_ab_hprime", f_dom, 1e-9);
    r.record("fprime_sup_le_b0_b1_hprime", fp_dom, 1e-6);
    r.record("fprime_sup_le_b0_hgap_b1_hprime", fp_dom_h, 1e-6);
    r.record("h_gap_le_hprime", h_gap_dom, 1e-12);
    r.record("identity_solution_constant", polynomial, 1e-9);

    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * steinbeta::detail::unit_uniform(rng); };
    double switch_gap = 0.0;
    double equation = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const BetaLaw law{uniform(0.1, 4.0), uniform(0.1, 4.0)};
        for (const auto& t : family) {
            const double bh = beta_expectation(law, t);
            const double m = law.mean();
            switch_gap =
                std::max(switch_gap, std::abs(stein_value_forward(law, t, bh, m) - stein_value_backward(law, t, bh, m)));
            for (double w : {0.13, 0.37, 0.61, 0.88}) {
                const double d = 1e-3;
                bool near_kink = false;
                for (double k : t.kinks) {
                    near_kink = near_kink || std::abs(w - k) < 3 * d;
                }
                if (near_kink) {
                    continue;
                }
                auto f = [&](double x) { return stein_value_at(law, t, bh, x); };
                const double fp = (f(w - 2 * d) - 8 * f(w - d) + 8 * f(w + d) - f(w + 2 * d)) / (12 * d);
                const double res =
                    w * (1 - w) * fp + (law.alpha * (1 - w) - law.beta * w) * f(w) - (t.h(w) - bh);
                equation = std::max(equation, std::abs(res));
            }
        }
    }
    r.record("forward_backward_agree_at_mean", switch_gap, 1e-9);
    r.record("stein_equation_finite_difference", equation, 1e-8);

    const BoundConstants arcsine = bound_constants(0.5, 0.5);
    const BoundConstants uniform_c = bound_constants(1.0, 1.0);
    const BoundConstants three = bound_constants(3.0, 3.0);
    const double spot = std::max({std::abs(arcsine.b0 - 2.0), std::abs(arcsine.b1 - 6.0), std::abs(uniform_c.b0),
                                  std::abs(uniform_c.b1 - 6.0), std::abs(three.b0 - 8.0), std::abs(three.b1 - 7.0)});
    r.record("bound_constants_spot_values", spot, 1e-15);

    // Fraction of sampled slopes whose sign disagrees with the classification.
    double mismatches = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double a = uniform(-0.95, 4.0);
        const double b = uniform(-0.95, 4.0);
        const MonotonicityClass cls = monotonicity_classify(a, b);
        auto log_g = [&](double w) { return (a - 1.0) * std::log(w) + (b - 1.0) * std::log1p(-w); };
        for (int i = 0; i < 1000; ++i) {
            const double w0 = (i + 0.25) / 1000.0;
            const double w1 = (i + 0.75) / 1000.0;
            const double slope = log_g(w1) - log_g(w0);
            bool rising = cls.shape == Monotonicity::increasing;
            if (cls.turning_point) {
                const double x = *cls.turning_point;
                if (w0 <= x && x <= w1) {
                    continue;
                }
                rising = (cls.shape == Monotonicity::increasing_then_decreasing) == (w1 < x);
            }
            if (cls.shape == Monotonicity::constant ? slope != 0.0 : (rising ? slope <= 0.0 : slope >= 0.0)) {
                mismatches += 1.0;
            }
        }
    }
    r.record("monotonicity_matches_sampled_slope", mismatches, 0.0);
}

inline void wasserstein_suite(std::vector<Check>& out, std::uint64_t seed)
{
    Recorder r("wasserstein", out);
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * steinbeta::detail::unit_uniform(rng); };

    double identity = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double a = uniform(0.1, 6.0);
        const double b = uniform(0.1, 6.0);
        const double t = uniform(0.0, 1.0);
        QuadratureOptions opt;
        opt.abs_tol = 1e-15;
        const double quad =
            integrate([&](double x) { return regularized_incomplete_beta(x, a, b); }, 0.0, t, {}, opt).value;
        identity = std::max(identity, std::abs(beta_cdf_integral(t, a, b) - quad));
    }
    r.record("cdf_integral_closed_form", identity, 1e-10);

    double sandwich = -std::numeric_limits<double>::infinity();
    double duality = sandwich;
    for (std::int64_t a : {1, 2, 3}) {
        for (std::int64_t b : {1, 2, 3}) {
            for (std::int64_t m : {1, 2, 3}) {
                for (std::int64_t n : {1, 2, 5, 10, 50, 100, 500}) {
                    const DistanceReport rep = urn_distance_report({a, b, m, n});
                    sandwich = std::max({sandwich, rep.lower_bound - rep.exact_dw, rep.exact_dw - rep.upper_bound});
                    if (n <= 10) {
                        const UrnParams p{a, b, m, n};
                        const DiscreteLaw law = urn_pmf(p);
                        for (const auto& t : lipschitz::standard_family()) {
                            duality = std::max(duality, expectation_gap(law, p.limit_law(), t) - rep.exact_dw);
                        }
                    }
                }
            }
        }
    }
    r.record("urn_sandwich", sandwich, 1e-9);
    r.record("duality_lipschitz_gaps", duality, 1e-9);

    double walk = -std::numeric_limits<double>::infinity();
    double witness = walk;
    for (std::int64_t n = 1; n <= 500; ++n) {
        const DistanceReport rep = walk_distance_report({n});
        walk = std::max(walk, rep.exact_dw - rep.upper_bound);
        witness = std::max(witness, rep.lower_bound - rep.exact_dw);
    }
    r.record("walk_below_arcsine_bound", walk, 0.0);
    r.record("walk_above_moment_gap", witness, 1e-12);

    double gap = 0.0;
    for (std::int64_t n = 1; n <= 2000; ++n) {
        gap = std::max(gap, std::abs(arcsine_moment_gap({n}) - 1.0 / (16.0 * static_cast<double>(n))));
    }
    r.record("arcsine_moment_gap", gap, 1e-12);

    double uniform_gap = 0.0;
    for (std::int64_t n = 1; n <= 1000; ++n) {
        const UrnParams p{1, 1, 1, n};
        const double g = expectation_gap(urn_pmf(p), p.limit_law(), lipschitz::parabola());
        uniform_gap = std::max(uniform_gap, std::abs(g - 1.0 / (6.0 * static_cast<double>(n))));
    }
    r.record("uniform_urn_witness_gap", uniform_gap, 1e-12);

    const DiscreteLaw law = urn_pmf({2, 3, 2, 40});
    const BetaLaw target{1.0, 1.5};
    r.record("exact_vs_grid_estimate",
             std::abs(wasserstein_exact(law, target) - wasserstein_grid_estimate(law, target, 1'000'000, seed)), 1e-6);
}

} // namespace detail

struct Options {
    std::uint64_t seed = 1;
    std::size_t grid_size = 512;
};

/// Runs one suite by name, or every suite for "all".
inline std::vector<Check> run(const std::string& suite, const Options& opt = {})
{
    const bool all = suite == "all";
    if (!all && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
        steinbeta::detail::fail_domain("verify", "unknown suite '" + suite + "'");
    }
    std::vector<Check> out;
    if (all || suite == "special_functions") {
        detail::special_functions_suite(out, opt.seed);
    }
    if (all || suite == "distributions") {
        detail::distributions_suite(out);
    }
    if (all || suite == "stein_discrete") {
        detail::stein_discrete_suite(out, opt.seed);
    }
    if (all || suite == "stein_beta") {
        detail::stein_beta_suite(out, opt.seed, opt.grid_size);
    }
    if (all || suite == "wasserstein") {
        detail::wasserstein_suite(out, opt.seed);
    }
    return out;
}

inline bool all_passed(const std::vector<Check>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

} // namespace steinbeta::verify
