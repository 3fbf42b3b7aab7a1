#include "steinbeta/distributions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace sb = steinbeta;

namespace {

// Exhaustive walk over the urn's binary draw tree; returns P(S_n = k).
std::vector<double> urn_by_enumeration(const sb::UrnParams& p)
{
    std::vector<double> out(static_cast<std::size_t>(p.n + 1), 0.0);
    std::function<void(std::int64_t, std::int64_t, std::int64_t, double)> go =
        [&](std::int64_t step, std::int64_t white, std::int64_t black, double prob) {
            if (step == p.n) {
                out[static_cast<std::size_t>((white - p.alpha) / p.m)] += prob;
                return;
            }
            const double total = static_cast<double>(white + black);
            go(step + 1, white + p.m, black, prob * static_cast<double>(white) / total);
            go(step + 1, white, black + p.m, prob * static_cast<double>(black) / total);
        };
    go(0, p.alpha, p.beta, 1.0);
    return out;
}

// All 2^(2n) paths; returns P(L_2n = 2k) indexed by k.
std::vector<double> walk_by_enumeration(std::int64_t n)
{
    std::vector<double> out(static_cast<std::size_t>(n + 1), 0.0);
    const std::int64_t length = 2 * n;
    const std::uint64_t paths = std::uint64_t{1} << length;
    const double weight = std::ldexp(1.0, -static_cast<int>(length));
    for (std::uint64_t path = 0; path < paths; ++path) {
        std::int64_t pos = 0;
        std::int64_t last = 0;
        for (std::int64_t t = 0; t < length; ++t) {
            pos += ((path >> t) & 1U) ? 1 : -1;
            if (pos == 0) {
                last = t + 1;
            }
        }
        out[static_cast<std::size_t>(last / 2)] += weight;
    }
    return out;
}

double falling(double x, std::int64_t k)
{
    double r = 1.0;
    for (std::int64_t i = 0; i < k; ++i) {
        r *= x - static_cast<double>(i);
    }
    return r;
}

const std::int64_t small_grid[] = {1, 2, 3};

} // namespace

TEST(BetaLaw, PdfSpotValues)
{
    EXPECT_DOUBLE_EQ(sb::beta_pdf({1.0, 1.0}, 0.3), 1.0);
    EXPECT_NEAR(sb::beta_pdf(sb::arcsine_law(), 0.5), 2.0 / std::numbers::pi, 1e-15);
    EXPECT_EQ(sb::beta_pdf({2.0, 5.0}, -0.2), 0.0);
    EXPECT_EQ(sb::beta_pdf({2.0, 5.0}, 1.2), 0.0);
    EXPECT_TRUE(std::isinf(sb::beta_pdf(sb::arcsine_law(), 0.0)));
    EXPECT_EQ(sb::beta_pdf({2.0, 2.0}, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(sb::beta_pdf({1.0, 3.0}, 0.0), 3.0);
}

TEST(BetaLaw, CdfSpotValues)
{
    EXPECT_NEAR(sb::beta_cdf({1.0, 1.0}, 0.7), 0.7, 1e-15);
    EXPECT_NEAR(sb::beta_cdf(sb::arcsine_law(), 0.25), 1.0 / 3.0, 1e-14);
    EXPECT_EQ(sb::beta_cdf({2.0, 3.0}, 1.5), 1.0);
    EXPECT_EQ(sb::beta_cdf({2.0, 3.0}, -1.0), 0.0);
}

TEST(BetaLaw, MixedMoments)
{
    EXPECT_EQ(sb::beta_mixed_moment({2.5, 0.3}, 0, 0), 1.0);
    EXPECT_NEAR(sb::beta_mixed_moment(sb::arcsine_law(), 2, 0), 3.0 / 8.0, 1e-15);
    EXPECT_NEAR(sb::beta_mixed_moment({1.0, 1.0}, 1, 1), 1.0 / 6.0, 1e-15);
    EXPECT_THROW(sb::beta_mixed_moment({1.0, 1.0}, -1, 0), sb::domain_error);
}

TEST(BetaLaw, RejectsNonPositiveShapes)
{
    EXPECT_THROW((sb::BetaLaw{0.0, 1.0}), sb::domain_error);
    EXPECT_THROW((sb::BetaLaw{1.0, -2.0}), sb::domain_error);
}

TEST(UrnPmf, SpotValues)
{
    const auto two = sb::urn_pmf({1, 1, 1, 2});
    ASSERT_EQ(two.size(), 3U);
    for (double p : two.masses()) {
        EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
    }
    EXPECT_EQ(two.scale(), 2.0);

    const auto one = sb::urn_pmf({1, 1, 1, 1});
    EXPECT_NEAR(one.mass(0), 0.5, 1e-15);
    EXPECT_NEAR(one.mass(1), 0.5, 1e-15);

    const auto skewed = sb::urn_pmf({2, 1, 1, 2});
    EXPECT_NEAR(skewed.mass(0), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(skewed.mass(1), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(skewed.mass(2), 1.0 / 2.0, 1e-15);
}

TEST(UrnPmf, MatchesTreeEnumeration)
{
    for (std::int64_t a : {1, 2, 3, 7}) {
        for (std::int64_t b : {1, 2, 5}) {
            for (std::int64_t m : {1, 2, 3}) {
                for (std::int64_t n : {1, 3, 6, 12}) {
                    const sb::UrnParams p{a, b, m, n};
                    const auto law = sb::urn_pmf(p);
                    const auto want = urn_by_enumeration(p);
                    for (std::int64_t k = 0; k <= n; ++k) {
                        EXPECT_NEAR(law.mass(k), want[static_cast<std::size_t>(k)], 1e-13)
                            << a << " " << b << " " << m << " " << n << " k=" << k;
                    }
                }
            }
        }
    }
}

TEST(UrnPmf, SumsToOneBeforeRenormalization)
{
    for (std::int64_t a : {1, 2, 3, 7}) {
        for (std::int64_t b : {1, 2, 3, 7}) {
            for (std::int64_t m : {1, 2, 3, 7}) {
                for (std::int64_t n = 1; n <= 200; ++n) {
                    const auto law = sb::urn_pmf({a, b, m, n});
                    ASSERT_LE(std::abs(law.normalization_deviation()), 1e-10) << a << " " << b << " " << m << " " << n;
                    ASSERT_FALSE(law.renormalized());
                }
            }
        }
    }
}

TEST(UrnPmf, MatchesLgammaClosedForm)
{
    for (const sb::UrnParams p : {sb::UrnParams{1, 1, 1, 60}, sb::UrnParams{7, 2, 3, 80}, sb::UrnParams{2, 7, 1, 40}}) {
        const double a = static_cast<double>(p.alpha) / static_cast<double>(p.m);
        const double b = static_cast<double>(p.beta) / static_cast<double>(p.m);
        const double n = static_cast<double>(p.n);
        const auto law = sb::urn_pmf(p);
        for (std::int64_t k = 0; k <= p.n; ++k) {
            const double kd = static_cast<double>(k);
            const double expected =
                std::exp(std::lgamma(n + 1) - std::lgamma(kd + 1) - std::lgamma(n - kd + 1) + std::lgamma(a + kd)
                         - std::lgamma(a) + std::lgamma(b + n - kd) - std::lgamma(b) - std::lgamma(a + b + n)
                         + std::lgamma(a + b));
            EXPECT_NEAR(law.mass(k), expected, 1e-11 * expected) << k;
        }
    }
}

TEST(UrnPmf, LargeNSumsToOneWithoutRenormalization)
{
    for (const sb::UrnParams p : {sb::UrnParams{1, 1, 1, 1000}, sb::UrnParams{7, 1, 2, 3000}, sb::UrnParams{3, 7, 7, 2000}}) {
        const auto law = sb::urn_pmf(p);
        EXPECT_LE(std::abs(law.normalization_deviation()), sb::DiscreteLaw::sum_tolerance) << p.n;
        EXPECT_FALSE(law.renormalized());
    }
}

TEST(UrnPmf, NeighbouringMassesFollowExactRatio)
{
    const sb::UrnParams p{2, 3, 1, 500};
    const auto law = sb::urn_pmf(p);
    for (std::int64_t k = 0; k < p.n; ++k) {
        const double kd = static_cast<double>(k);
        const double r = ((500.0 - kd) * (2.0 + kd)) / ((kd + 1.0) * (3.0 + 500.0 - kd - 1.0));
        if (law.mass(k) > 1e-300) {
            EXPECT_NEAR(law.mass(k + 1) / law.mass(k), r, 4e-16 * r) << k;
        }
    }
}

TEST(DiscreteLawBuild, RenormalizesWhenSumMissesTolerance)
{
    const auto law = sb::DiscreteLaw::from_log_masses(0, {std::log(0.5), std::log(0.5 + 1e-11)}, 1.0);
    EXPECT_TRUE(law.renormalized());
    EXPECT_NEAR(law.normalization_deviation(), 1e-11, 1e-15);
    EXPECT_NEAR(law.mass(0) + law.mass(1), 1.0, 1e-15);
}

TEST(UrnPmf, LargeNStaysFinite)
{
    const auto law = sb::urn_pmf({3, 2, 1, 5000});
    double total = 0.0;
    for (double p : law.masses()) {
        ASSERT_TRUE(std::isfinite(p));
        ASSERT_GE(p, 0.0);
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(UrnPmf, RejectsInvalidParameters)
{
    EXPECT_THROW(sb::urn_pmf({0, 1, 1, 1}), sb::domain_error);
    EXPECT_THROW(sb::urn_pmf({1, 0, 1, 1}), sb::domain_error);
    EXPECT_THROW(sb::urn_pmf({1, 1, 0, 1}), sb::domain_error);
    EXPECT_THROW(sb::urn_pmf({1, 1, 1, 0}), sb::domain_error);
}

TEST(UrnFactorialMoment, SpotValues)
{
    EXPECT_NEAR(sb::urn_factorial_moment({2, 3, 1, 7}, 0, 0), 1.0, 1e-15);
    EXPECT_NEAR(sb::urn_factorial_moment({1, 1, 1, 10}, 1, 0), 5.0, 1e-13);
    EXPECT_EQ(sb::urn_factorial_moment({1, 1, 1, 3}, 2, 2), 0.0);
    EXPECT_THROW(sb::urn_factorial_moment({1, 1, 1, 3}, -1, 2), sb::domain_error);
}

TEST(UrnFactorialMoment, MatchesBruteForceSum)
{
    for (std::int64_t a : small_grid) {
        for (std::int64_t b : small_grid) {
            for (std::int64_t m : small_grid) {
                for (std::int64_t n : {1, 2, 5, 10, 37, 100}) {
                    const sb::UrnParams p{a, b, m, n};
                    const auto law = sb::urn_pmf(p);
                    for (std::int64_t i = 0; i <= 6; ++i) {
                        for (std::int64_t j = 0; i + j <= 6; ++j) {
                            const double brute = law.expect_index([&](std::int64_t k) {
                                return falling(static_cast<double>(k), i) * falling(static_cast<double>(n - k), j);
                            });
                            const double formula = sb::urn_factorial_moment(p, i, j);
                            if (i + j > n) {
                                EXPECT_EQ(formula, 0.0);
                                EXPECT_EQ(brute, 0.0);
                            } else {
                                EXPECT_LE(std::abs(formula - brute), 1e-9 * std::abs(brute));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST(UrnFactorialMoment, MomentRatioIdentity)
{
    for (std::int64_t a : small_grid) {
        for (std::int64_t b : small_grid) {
            for (std::int64_t m : small_grid) {
                for (std::int64_t n : {1, 4, 20, 100}) {
                    const sb::UrnParams p{a, b, m, n};
                    const auto law = sb::urn_pmf(p);
                    const double nd = static_cast<double>(n);
                    for (std::int64_t i = 0; i <= 6; ++i) {
                        for (std::int64_t j = 0; i + j <= 6 && i + j <= n; ++j) {
                            const double scale = std::pow(nd, static_cast<double>(i + j));
                            const double lhs = law.expect_index([&](std::int64_t k) {
                                return falling(static_cast<double>(k), i) * falling(static_cast<double>(n - k), j)
                                       / scale;
                            });
                            const double rhs = falling(nd, i + j) / scale * sb::beta_mixed_moment(p.limit_law(), i, j);
                            EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(rhs)) << a << b << m << " " << n;
                        }
                    }
                }
            }
        }
    }
}

TEST(WalkPmf, SpotValuesAndShape)
{
    const auto one = sb::walk_pmf({1});
    EXPECT_NEAR(one.mass(0), 0.5, 1e-15);
    EXPECT_NEAR(one.mass(1), 0.5, 1e-15);

    const auto two = sb::walk_pmf({2});
    EXPECT_NEAR(two.mass(0), 3.0 / 8.0, 1e-15);
    EXPECT_NEAR(two.mass(1), 1.0 / 4.0, 1e-15);
    EXPECT_NEAR(two.mass(2), 3.0 / 8.0, 1e-15);
    // Index k sits at L_2n / (2n) = k / n.
    EXPECT_EQ(two.position(1), 0.5);
    EXPECT_THROW(sb::walk_pmf({0}), sb::domain_error);
}

TEST(WalkPmf, MatchesPathEnumeration)
{
    for (std::int64_t n = 1; n <= 8; ++n) {
        const auto law = sb::walk_pmf({n});
        const auto want = walk_by_enumeration(n);
        for (std::int64_t k = 0; k <= n; ++k) {
            EXPECT_NEAR(law.mass(k), want[static_cast<std::size_t>(k)], 1e-15) << n << " " << k;
        }
    }
}

TEST(WalkPmf, SymmetricNormalizedAndMoments)
{
    for (std::int64_t n = 1; n <= 2000; n += (n < 50 ? 1 : 37)) {
        const auto law = sb::walk_pmf({n});
        EXPECT_LE(std::abs(law.normalization_deviation()), 1e-12) << n;
        for (std::int64_t k = 0; k <= n; ++k) {
            ASSERT_NEAR(law.mass(k), law.mass(n - k), 1e-15);
        }
        const double nd = static_cast<double>(n);
        EXPECT_NEAR(law.expect_scaled([](double w) { return w; }), 0.5, 1e-12);
        EXPECT_NEAR(law.expect_scaled([](double w) { return w * w; }), 3.0 / 8.0 + 1.0 / (8.0 * nd), 1e-12);
    }
}

TEST(Simulators, AreDeterministicPerSeed)
{
    const sb::UrnParams urn{2, 3, 1, 6};
    const auto a = sb::simulate_urn(urn, 5000, 42);
    const auto b = sb::simulate_urn(urn, 5000, 42);
    const auto c = sb::simulate_urn(urn, 5000, 43);
    EXPECT_TRUE(std::equal(a.masses().begin(), a.masses().end(), b.masses().begin()));
    EXPECT_FALSE(std::equal(a.masses().begin(), a.masses().end(), c.masses().begin()));

    const auto w1 = sb::simulate_walk_L({5}, 5000, 7);
    const auto w2 = sb::simulate_walk_L({5}, 5000, 7);
    EXPECT_TRUE(std::equal(w1.masses().begin(), w1.masses().end(), w2.masses().begin()));
    EXPECT_THROW(sb::simulate_urn(urn, 0, 1), sb::domain_error);
    EXPECT_THROW(sb::simulate_walk_L({5}, 0, 1), sb::domain_error);
}

TEST(Simulators, UrnMatchesExactLaw)
{
    const std::int64_t draws = 1'000'000;
    const auto sim = sb::simulate_urn({1, 1, 1, 2}, draws, 2024);
    const auto exact = sb::urn_pmf({1, 1, 1, 2});
    double tv = 0.0;
    for (std::int64_t k = 0; k <= 2; ++k) {
        tv += 0.5 * std::abs(sim.mass(k) - exact.mass(k));
    }
    EXPECT_LE(tv, 0.005);

    const sb::UrnParams single{3, 2, 2, 1};
    const auto s1 = sb::simulate_urn(single, 200'000, 9);
    const double p = 3.0 / 5.0;
    EXPECT_NEAR(s1.mass(1), p, 3.0 * std::sqrt(p * (1 - p) / 200'000.0));
}

TEST(Simulators, WalkMatchesExactLaw)
{
    const std::int64_t draws = 400'000;
    for (std::int64_t n : {1, 2, 7}) {
        const auto sim = sb::simulate_walk_L({n}, draws, 99 + static_cast<std::uint64_t>(n));
        const auto exact = sb::walk_pmf({n});
        for (std::int64_t k = 0; k <= n; ++k) {
            const double p = exact.mass(k);
            EXPECT_NEAR(sim.mass(k), p, 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(draws)) + 1e-12);
        }
    }
}

TEST(DiscreteLaw, ValidatesMasses)
{
    EXPECT_THROW(sb::DiscreteLaw::from_masses(0, {0.5, 0.6}, 1.0), sb::domain_error);
    EXPECT_THROW(sb::DiscreteLaw::from_masses(0, {1.2, -0.2}, 1.0), sb::domain_error);
    EXPECT_THROW(sb::DiscreteLaw::from_masses(0, {}, 1.0), sb::domain_error);
    EXPECT_THROW(sb::DiscreteLaw::from_masses(0, {1.0}, 0.0), sb::domain_error);
    const auto law = sb::DiscreteLaw::from_masses(3, {0.25, 0.75}, 4.0);
    EXPECT_EQ(law.support_lo(), 3);
    EXPECT_EQ(law.support_hi(), 4);
    EXPECT_EQ(law.mass(2), 0.0);
    EXPECT_EQ(law.position(4), 1.0);
    EXPECT_NEAR(law.expect_scaled([](double w) { return w; }), 0.25 * 0.75 + 0.75, 1e-15);
}
