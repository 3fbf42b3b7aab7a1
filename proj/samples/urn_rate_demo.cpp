// Prints how the exact distance between the scaled urn count and its Beta
// limit shrinks with n, next to the two bounds.

#include "steinbeta/steinbeta.hpp"

#include <cstdio>
#include <vector>

int main()
{
    const steinbeta::UrnFamily family{2, 1, 1};
    const std::vector<std::int64_t> ns{1, 10, 100, 1000};
    std::printf("%6s %12s %12s %12s %10s\n", "n", "lower", "d_W", "upper", "n*d_W");
    for (const auto& row : steinbeta::rate_table(family, ns)) {
        std::printf("%6lld %12.6g %12.6g %12.6g %10.6f\n", static_cast<long long>(row.n), row.lower, row.dw, row.upper,
                    row.n_dw);
    }

    const auto c = steinbeta::bound_constants(2.0, 1.0);
    std::printf("\nBeta(2, 1): b0 = %g, b1 = %g (%s)\n", c.b0, c.b1, steinbeta::to_string(c.case_id));
    const auto usage = steinbeta::bound_usage({2.0, 1.0});
    std::printf("  largest ||f'|| / ((b0 + b1) ||h'||) over the test family: %.4f (h = %s)\n", usage.fprime_ratio,
                usage.fprime_test.c_str());

    const auto walk = steinbeta::walk_distance_report({100});
    std::printf("walk n=100: d_W = %.6g <= %.6g\n", walk.exact_dw, walk.upper_bound);
    return 0;
}
