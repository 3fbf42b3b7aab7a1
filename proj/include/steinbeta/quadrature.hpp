#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature and compensated summation.

#include "steinbeta/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

namespace steinbeta {

/// Neumaier-compensated running sum. Terms are accumulated in the order they
/// are added, so identical inputs give bit-identical totals.
class KahanSum {
public:
    KahanSum& operator+=(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

struct QuadratureOptions {
    double abs_tol = 1e-14;
    double rel_tol = 1e-13; ///< relative to the integral of |f|
    int max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    double abs_value = 0.0; ///< integral of |f|, estimated
    int intervals = 0;
};

namespace detail {

struct GkSegment {
    double a;
    double b;
    double value;
    double error;
    double abs_value;
    bool operator<(const GkSegment& o) const noexcept { return error < o.error; }
};

template <class F>
GkSegment gauss_kronrod_15(const F& f, double a, double b)
{
    static constexpr std::array<double, 8> xgk{
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
    };
    static constexpr std::array<double, 8> wgk{
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    };
    // Gauss weights for the 7-point rule on nodes xgk[1], xgk[3], xgk[5], xgk[7].
    static constexpr std::array<double, 4> wg{
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    };

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * wgk[7];
    double gauss = fc * wg[3];
    double absk = std::abs(fc) * wgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += wgk[j] * (f1 + f2);
        absk += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) {
            gauss += wg[j / 2] * (f1 + f2);
        }
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half), absk * std::abs(half)};
}

} // namespace detail

/// Integrate f over [a, b]. `breaks` lists interior points where f or its
/// derivative is not smooth; the initial partition splits there. Throws
/// numerical_error when the interval budget is exhausted before the error
/// estimate falls below max(abs_tol, rel_tol * integral of |f|).
template <class F>
QuadratureResult integrate(const F& f, double a, double b, std::span<const double> breaks = {},
                           const QuadratureOptions& opt = {})
{
    if (a == b) {
        return {};
    }
    std::vector<double> cuts{a};
    for (double c : breaks) {
        if (c > a && c < b) {
            cuts.push_back(c);
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<detail::GkSegment> heap;
    double total_err = 0.0;
    double total_abs = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        heap.push_back(detail::gauss_kronrod_15(f, cuts[i], cuts[i + 1]));
        total_err += heap.back().error;
        total_abs += heap.back().abs_value;
    }
    std::make_heap(heap.begin(), heap.end());

    // The running totals are updated by differences and drift by about
    // eps times the largest error seen, so they are re-summed from the
    // leaves periodically and before convergence is accepted.
    auto resum = [&] {
        KahanSum err;
        KahanSum absv;
        for (const auto& s : heap) {
            err += s.error;
            absv += s.abs_value;
        }
        total_err = err.value();
        total_abs = absv.value();
    };
    auto converged = [&] { return total_err <= std::max(opt.abs_tol, opt.rel_tol * total_abs); };

    int count = static_cast<int>(heap.size());
    while (true) {
        if (converged() || count % 64 == 0) {
            resum();
            if (converged()) {
                break;
            }
        }
        if (count >= opt.max_intervals) {
            std::ostringstream msg;
            msg << "integrate: no convergence on [" << a << ", " << b << "] after " << count
                << " intervals; estimated error " << total_err << " against target "
                << std::max(opt.abs_tol, opt.rel_tol * total_abs);
            throw numerical_error(msg.str());
        }
        std::pop_heap(heap.begin(), heap.end());
        const auto worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval cannot be split further in floating point; accept it.
            total_err -= worst.error;
            heap.push_back({worst.a, worst.b, worst.value, 0.0, worst.abs_value});
            std::push_heap(heap.begin(), heap.end());
            if (heap.front().error == 0.0) {
                break;
            }
            continue;
        }
        const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        ++count;
    }

    KahanSum value;
    KahanSum err;
    KahanSum absv;
    for (const auto& s : heap) {
        value += s.value;
        err += s.error;
        absv += s.abs_value;
    }
    return {value.value(), err.value(), absv.value(), count};
}

} // namespace steinbeta
