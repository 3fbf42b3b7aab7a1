#include "steinbeta/wasserstein.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace sb = steinbeta;

TEST(BetaCdfIntegral, MatchesQuadrature)
{
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> us(0.1, 6.0);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    boost::math::quadrature::tanh_sinh<double> ts;
    for (int trial = 0; trial < 50; ++trial) {
        const double a = us(rng);
        const double b = us(rng);
        const double t = ut(rng);
        const double want = ts.integrate([&](double x) { return boost::math::ibeta(a, b, x); }, 0.0, t);
        EXPECT_NEAR(sb::beta_cdf_integral(t, a, b), want, 1e-10) << a << " " << b << " " << t;
    }
    EXPECT_EQ(sb::beta_cdf_integral(0.0, 2.0, 3.0), 0.0);
    // int_0^1 I_x dx = 1 - E Z.
    EXPECT_NEAR(sb::beta_cdf_integral(1.0, 2.0, 3.0), 0.6, 1e-15);
    EXPECT_THROW(sb::beta_cdf_integral(1.5, 2.0, 3.0), sb::domain_error);
}

TEST(WassersteinExact, SpotValues)
{
    EXPECT_NEAR(sb::wasserstein_exact(sb::urn_pmf({1, 1, 1, 1}), {1.0, 1.0}), 0.25, 1e-15);

    // A point mass at the Beta(1, 3) mean 1/4 sits at distance E|Z - 1/4|.
    const auto point = sb::DiscreteLaw::from_masses(1, {1.0}, 4.0);
    const double a = 1.0;
    const double b = 3.0;
    const double c = 0.25;
    const double below = c * boost::math::ibeta(a, b, c) - 0.25 * boost::math::ibeta(a + 1.0, b, c);
    EXPECT_NEAR(sb::wasserstein_exact(point, {a, b}), 2.0 * below, 1e-14);
}

TEST(WassersteinExact, RejectsSupportOutsideUnitInterval)
{
    const auto law = sb::DiscreteLaw::from_masses(0, {0.5, 0.5}, 0.5);
    EXPECT_THROW(sb::wasserstein_exact(law, {1.0, 1.0}), sb::domain_error);
    const auto negative = sb::DiscreteLaw::from_masses(-1, {0.5, 0.5}, 2.0);
    EXPECT_THROW(sb::wasserstein_exact(negative, {1.0, 1.0}), sb::domain_error);
}

TEST(WassersteinExact, AgreesWithGridEstimate)
{
    const std::vector<std::pair<sb::DiscreteLaw, sb::BetaLaw>> cases{
        {sb::urn_pmf({1, 1, 1, 5}), {1.0, 1.0}},
        {sb::urn_pmf({2, 3, 2, 40}), {1.0, 1.5}},
        {sb::urn_pmf({3, 1, 3, 17}), {1.0, 1.0 / 3.0}},
        {sb::walk_pmf({12}), sb::arcsine_law()},
    };
    std::uint64_t seed = 1;
    for (const auto& [law, target] : cases) {
        const double exact = sb::wasserstein_exact(law, target);
        const double grid = sb::wasserstein_grid_estimate(law, target, 1'000'000, seed++);
        EXPECT_NEAR(exact, grid, 1e-6);
    }
    EXPECT_THROW(sb::wasserstein_grid_estimate(sb::walk_pmf({3}), sb::arcsine_law(), 0, 1), sb::domain_error);
}

TEST(WassersteinExact, DominatesLipschitzGaps)
{
    for (std::int64_t n : {1, 3, 20}) {
        for (std::int64_t m : {1, 2}) {
            const sb::UrnParams p{2, 1, m, n};
            const auto law = sb::urn_pmf(p);
            const double dw = sb::wasserstein_exact(law, p.limit_law());
            for (const auto& t : sb::lipschitz::standard_family()) {
                EXPECT_LE(sb::expectation_gap(law, p.limit_law(), t), dw + 1e-9) << t.name;
            }
        }
    }
    for (std::int64_t n : {1, 2, 10, 100}) {
        const double dw = sb::wasserstein_exact(sb::walk_pmf({n}), sb::arcsine_law());
        EXPECT_GE(dw + 1e-12, sb::arcsine_moment_gap({n}));
    }
}

TEST(Bounds, UrnUpperSpotValues)
{
    EXPECT_NEAR(sb::urn_upper_bound({1, 1, 1, 100}), 0.105, 1e-15);
    // m + max(alpha, beta) = 3 here, so the first term is 3/400.
    EXPECT_NEAR(sb::urn_upper_bound({1, 1, 2, 100}), (3.0 / 400.0 + 1.0 / 400.0) * 8.0 + 3.0 / 200.0, 1e-15);
    EXPECT_NEAR(sb::urn_upper_bound({1, 1, 2, 100}), 0.095, 1e-15);
    EXPECT_NEAR(sb::urn_upper_bound({2, 3, 1, 200}) * 2.0, sb::urn_upper_bound({2, 3, 1, 100}), 1e-12);
    EXPECT_THROW(sb::urn_upper_bound({1, 1, 0, 3}), sb::domain_error);
}

TEST(Bounds, UrnLowerSpotValuesAndWitness)
{
    EXPECT_NEAR(sb::urn_lower_bound({1, 1, 1, 100}), 1.0 / 600.0, 1e-17);
    EXPECT_NEAR(sb::urn_lower_bound({1, 1, 1, 1}), 1.0 / 6.0, 1e-16);
    EXPECT_NEAR(sb::urn_lower_bound({2, 5, 3, 70}) * 70.0, sb::urn_lower_bound({2, 5, 3, 1}), 1e-15);

    const sb::UrnParams one{1, 1, 1, 1};
    EXPECT_NEAR(sb::expectation_gap(sb::urn_pmf(one), one.limit_law(), sb::lipschitz::parabola()), 1.0 / 6.0, 1e-13);
    for (std::int64_t a : {1, 2, 3}) {
        for (std::int64_t b : {1, 2, 3}) {
            for (std::int64_t m : {1, 2, 3}) {
                for (std::int64_t n : {1, 7, 60}) {
                    const sb::UrnParams p{a, b, m, n};
                    const auto law = sb::urn_pmf(p);
                    const double exact_gap = std::abs(law.expect_scaled([](double w) { return w * (1.0 - w); })
                                                      - sb::beta_mixed_moment(p.limit_law(), 1, 1));
                    EXPECT_NEAR(exact_gap, sb::urn_lower_bound(p), 1e-12);
                }
            }
        }
    }
}

TEST(Bounds, ArcsineSpotValues)
{
    EXPECT_DOUBLE_EQ(sb::arcsine_upper_bound({1}), 21.5);
    EXPECT_NEAR(sb::arcsine_upper_bound({100}), 0.1358, 1e-15);
    for (std::int64_t n = 1; n < 1000; n *= 3) {
        EXPECT_LT(sb::arcsine_upper_bound({2 * n}), sb::arcsine_upper_bound({n}));
    }
    EXPECT_NEAR(sb::arcsine_moment_gap({1}), 1.0 / 16.0, 1e-15);
    EXPECT_NEAR(sb::arcsine_moment_gap({2}), 1.0 / 32.0, 1e-15);
    EXPECT_NEAR(sb::arcsine_moment_gap({1000}), 1.0 / 16000.0, 1e-12);
    for (std::int64_t n = 1; n <= 2000; n += 13) {
        EXPECT_NEAR(sb::arcsine_moment_gap({n}) * 16.0 * static_cast<double>(n), 1.0, 1e-10);
    }
    EXPECT_THROW(sb::arcsine_upper_bound({0}), sb::domain_error);
}

TEST(DistanceReport, UrnSandwich)
{
    for (std::int64_t a : {1, 2, 3}) {
        for (std::int64_t b : {1, 2, 3}) {
            for (std::int64_t m : {1, 2, 3}) {
                for (std::int64_t n : {1, 2, 5, 10, 50}) {
                    const auto r = sb::urn_distance_report({a, b, m, n});
                    EXPECT_TRUE(r.sandwiched()) << a << b << m << " n=" << n << " lower=" << r.lower_bound
                                                << " dw=" << r.exact_dw << " upper=" << r.upper_bound;
                    EXPECT_GE(r.exact_dw, 0.0);
                }
            }
        }
    }
}

TEST(DistanceReport, WalkWithinBound)
{
    for (std::int64_t n = 1; n <= 60; ++n) {
        const auto r = sb::walk_distance_report({n});
        EXPECT_TRUE(r.sandwiched()) << n;
        EXPECT_NEAR(r.lower_bound, 1.0 / (16.0 * static_cast<double>(n)), 1e-12);
    }
}

TEST(RateTable, OrderAndThreadIndependence)
{
    const std::vector<std::int64_t> ns{3, 10, 31, 100, 200};
    const sb::Family urn = sb::UrnFamily{2, 1, 1};
    const auto serial = sb::rate_table(urn, ns, 1);
    const auto parallel = sb::rate_table(urn, ns, 4);
    ASSERT_EQ(serial.size(), ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        EXPECT_EQ(serial[i].n, ns[i]);
        EXPECT_EQ(serial[i].dw, parallel[i].dw);
        EXPECT_EQ(serial[i].upper, parallel[i].upper);
        EXPECT_DOUBLE_EQ(serial[i].n_dw, static_cast<double>(ns[i]) * serial[i].dw);
        EXPECT_LE(serial[i].lower, serial[i].dw + 1e-9);
        EXPECT_LE(serial[i].dw, serial[i].upper + 1e-9);
    }
    const auto walk = sb::rate_table(sb::WalkFamily{}, {5, 10, 50, 100}, 2);
    for (const auto& row : walk) {
        EXPECT_LE(row.dw, 27.0 / (2.0 * row.n) + 8.0 / (row.n * row.n));
    }
}

TEST(RateTable, RejectsBadNLists)
{
    EXPECT_THROW(sb::rate_table(sb::WalkFamily{}, {}), sb::domain_error);
    EXPECT_THROW(sb::rate_table(sb::WalkFamily{}, {5, 5}), sb::domain_error);
    EXPECT_THROW(sb::rate_table(sb::WalkFamily{}, {10, 5}), sb::domain_error);
    EXPECT_THROW(sb::rate_table(sb::UrnFamily{0, 1, 1}, {1, 2}, 2), sb::domain_error);
}

TEST(RateTable, ScaledDistanceTrajectory)
{
    // Recorded, not asserted: the increments of n d_W along a doubling
    // sequence for the uniform urn. Only finiteness and positivity are checked.
    std::vector<std::int64_t> ns{10, 20, 40, 80, 160, 320, 640};
    const auto rows = sb::rate_table(sb::UrnFamily{1, 1, 1}, ns, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_TRUE(std::isfinite(rows[i].n_dw));
        EXPECT_GT(rows[i].n_dw, 0.0);
        if (i > 0) {
            RecordProperty("n_dw_step_" + std::to_string(rows[i].n),
                           std::to_string(rows[i].n_dw - rows[i - 1].n_dw));
        }
    }
}
