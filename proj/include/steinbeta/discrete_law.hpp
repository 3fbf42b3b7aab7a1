#pragma once

#include "steinbeta/errors.hpp"
#include "steinbeta/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace steinbeta {

/// A probability mass function on a finite integer interval
/// {support_lo, ..., support_hi}, with the map k -> k / scale onto the unit
/// interval. Masses are kept both in linear space and in log space; the log
/// table is the primary representation for laws built analytically.
class DiscreteLaw {
public:
    static constexpr double sum_tolerance = 1e-12;

    /// Build from log masses. The raw sum of the exponentiated masses is
    /// recorded; masses are renormalized only when it misses 1 by more than
    /// sum_tolerance.
    static DiscreteLaw from_log_masses(std::int64_t support_lo, std::vector<double> log_masses, double scale)
    {
        check_shape(log_masses.size(), scale);
        std::vector<double> masses(log_masses.size());
        for (std::size_t i = 0; i < log_masses.size(); ++i) {
            masses[i] = std::exp(log_masses[i]);
        }
        return from_mass_table(support_lo, std::move(masses), std::move(log_masses), scale);
    }

    /// Build from masses already available in both linear and log form, for
    /// constructions where the linear values carry more relative accuracy
    /// than exp(log) would (products of exact ratios, say).
    static DiscreteLaw from_mass_table(std::int64_t support_lo, std::vector<double> masses,
                                       std::vector<double> log_masses, double scale)
    {
        check_shape(log_masses.size(), scale);
        if (masses.size() != log_masses.size()) {
            detail::fail_domain("DiscreteLaw", "mass and log-mass tables differ in length");
        }
        KahanSum total;
        for (std::size_t i = 0; i < log_masses.size(); ++i) {
            if (std::isnan(log_masses[i]) || log_masses[i] > 1e-12 || !(masses[i] >= 0.0)) {
                detail::fail_domain("DiscreteLaw", "log mass at index " + std::to_string(i) + " is invalid");
            }
            total += masses[i];
        }
        const double deviation = total.value() - 1.0;
        DiscreteLaw law(support_lo, std::move(masses), std::move(log_masses), scale);
        law.raw_deviation_ = deviation;
        if (std::abs(deviation) > sum_tolerance) {
            const double log_total = std::log(total.value());
            for (std::size_t i = 0; i < law.masses_.size(); ++i) {
                law.log_masses_[i] -= log_total;
                law.masses_[i] /= total.value();
            }
            law.renormalized_ = true;
        }
        law.check_total();
        return law;
    }

    /// Build from linear masses, which must already sum to 1 within sum_tolerance.
    static DiscreteLaw from_masses(std::int64_t support_lo, std::vector<double> masses, double scale)
    {
        check_shape(masses.size(), scale);
        std::vector<double> logs(masses.size());
        KahanSum total;
        for (std::size_t i = 0; i < masses.size(); ++i) {
            if (!(masses[i] >= 0.0 && masses[i] <= 1.0 + sum_tolerance)) {
                detail::fail_domain("DiscreteLaw", "mass at index " + std::to_string(i) + " outside [0, 1]");
            }
            logs[i] = masses[i] > 0.0 ? std::log(masses[i]) : -std::numeric_limits<double>::infinity();
            total += masses[i];
        }
        DiscreteLaw law(support_lo, std::move(masses), std::move(logs), scale);
        law.raw_deviation_ = total.value() - 1.0;
        law.check_total();
        return law;
    }

    [[nodiscard]] std::int64_t support_lo() const noexcept { return lo_; }
    [[nodiscard]] std::int64_t support_hi() const noexcept { return lo_ + static_cast<std::int64_t>(masses_.size()) - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return masses_.size(); }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] std::span<const double> masses() const noexcept { return masses_; }
    [[nodiscard]] std::span<const double> log_masses() const noexcept { return log_masses_; }

    /// Mass at integer k; zero outside the support.
    [[nodiscard]] double mass(std::int64_t k) const noexcept
    {
        return contains(k) ? masses_[static_cast<std::size_t>(k - lo_)] : 0.0;
    }
    [[nodiscard]] double log_mass(std::int64_t k) const noexcept
    {
        return contains(k) ? log_masses_[static_cast<std::size_t>(k - lo_)]
                           : -std::numeric_limits<double>::infinity();
    }
    [[nodiscard]] bool contains(std::int64_t k) const noexcept { return k >= lo_ && k <= support_hi(); }

    /// Location of support point k on the unit interval.
    [[nodiscard]] double position(std::int64_t k) const noexcept { return static_cast<double>(k) / scale_; }

    /// Raw sum of masses minus one, as computed before any renormalization.
    [[nodiscard]] double normalization_deviation() const noexcept { return raw_deviation_; }
    [[nodiscard]] bool renormalized() const noexcept { return renormalized_; }

    /// E g(k / scale), summed in ascending k.
    template <class G>
    [[nodiscard]] double expect_scaled(const G& g) const
    {
        KahanSum acc;
        for (std::int64_t k = lo_; k <= support_hi(); ++k) {
            acc += mass(k) * g(position(k));
        }
        return acc.value();
    }

    /// E g(k), summed in ascending k.
    template <class G>
    [[nodiscard]] double expect_index(const G& g) const
    {
        KahanSum acc;
        for (std::int64_t k = lo_; k <= support_hi(); ++k) {
            acc += mass(k) * g(k);
        }
        return acc.value();
    }

private:
    DiscreteLaw(std::int64_t lo, std::vector<double> masses, std::vector<double> logs, double scale)
        : lo_(lo), masses_(std::move(masses)), log_masses_(std::move(logs)), scale_(scale)
    {
    }

    static void check_shape(std::size_t n, double scale)
    {
        if (n == 0) {
            detail::fail_domain("DiscreteLaw", "support must be nonempty");
        }
        if (!(std::isfinite(scale) && scale > 0.0)) {
            detail::fail_domain("DiscreteLaw", "scale must be finite and > 0");
        }
    }

    void check_total() const
    {
        KahanSum total;
        for (double m : masses_) {
            total += m;
        }
        if (std::abs(total.value() - 1.0) > sum_tolerance) {
            detail::fail_domain("DiscreteLaw", "masses sum to " + std::to_string(total.value()) + ", not 1");
        }
    }

    std::int64_t lo_;
    std::vector<double> masses_;
    std::vector<double> log_masses_;
    double scale_;
    double raw_deviation_ = 0.0;
    bool renormalized_ = false;
};

} // namespace steinbeta
