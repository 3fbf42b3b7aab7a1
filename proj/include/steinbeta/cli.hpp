#pragma once

// The command layer behind the `steinbeta` executable: a parsed RunConfig is
// turned into a CSV or JSON document. Argument parsing lives in the
// executable; everything here is deterministic for a fixed config.

#include "steinbeta/distributions.hpp"
#include "steinbeta/errors.hpp"
#include "steinbeta/format.hpp"
#include "steinbeta/io.hpp"
#include "steinbeta/stein_beta.hpp"
#include "steinbeta/verify.hpp"
#include "steinbeta/wasserstein.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace steinbeta::cli {

enum class Command { pmf, stein_solve, bounds, distance, rate_table, verify, simulate };
enum class Format { csv, json };

enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_invalid = 2,
    exit_numerical = 3,
    exit_io = 4,
};

inline const char* command_name(Command c) noexcept
{
    switch (c) {
    case Command::pmf: return "pmf";
    case Command::stein_solve: return "stein-solve";
    case Command::bounds: return "bounds";
    case Command::distance: return "distance";
    case Command::rate_table: return "rate-table";
    case Command::verify: return "verify";
    case Command::simulate: return "simulate";
    }
    return "?";
}

struct RunConfig {
    Command command = Command::pmf;
    /// urn | walk | beta. Which values are accepted depends on the command.
    std::string family = "urn";
    /// Kept as text: integers for the urn, decimals for a Beta law.
    std::string alpha = "1";
    std::string beta = "1";
    std::int64_t m = 1;
    std::int64_t n = 1;
    std::vector<std::int64_t> n_list;
    std::string test = "identity";
    std::size_t grid_size = stein_default_grid;
    std::uint64_t seed = 1;
    std::int64_t draws = 1'000'000;
    std::int64_t mc_points = 0;
    bool usage = false;
    std::string suite = "all";
    unsigned threads = 0;
    Format format = Format::csv;
    std::string output_path;
};

struct RunResult {
    int exit_code = exit_ok;
    std::string document;
};

namespace detail {

inline std::int64_t urn_integer(const std::string& name, const std::string& text)
{
    std::int64_t v = 0;
    try {
        v = io::parse_integer(text);
    } catch (const domain_error&) {
        steinbeta::detail::fail_domain(name, "must be an integer >= 1 for the urn family, got '" + text + "'");
    }
    return v;
}

inline double shape_real(const std::string& name, const std::string& text)
{
    double v = 0.0;
    try {
        v = io::parse_real(text);
    } catch (const domain_error&) {
        steinbeta::detail::fail_domain(name, "must be a positive decimal, got '" + text + "'");
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
        steinbeta::detail::fail_domain(name, "must be a positive decimal, got '" + text + "'");
    }
    return v;
}

inline UrnParams urn_params(const RunConfig& c, std::int64_t n)
{
    UrnParams p{urn_integer("alpha", c.alpha), urn_integer("beta", c.beta), c.m, n};
    p.validate();
    return p;
}

inline BetaLaw beta_law(const RunConfig& c) { return {shape_real("alpha", c.alpha), shape_real("beta", c.beta)}; }

inline void require_family(const RunConfig& c, std::initializer_list<const char*> allowed)
{
    std::string list;
    for (const char* f : allowed) {
        if (c.family == f) {
            return;
        }
        list += list.empty() ? f : std::string(", ") + f;
    }
    steinbeta::detail::fail_domain("family", "'" + c.family + "' is not one of: " + list);
}

inline std::string render(const io::CsvTable& table) { return io::to_csv_string(table); }
inline std::string render(const nlohmann::json& j) { return j.dump(2) + "\n"; }

template <class Csv, class Json>
std::string emit(Format f, Csv&& csv, Json&& json)
{
    return f == Format::csv ? render(csv()) : render(json());
}

/// Two-column quantity,value table.
/// Ordered quantity/value pairs. CSV gets the text form, JSON the typed value.
struct KeyValues {
    struct Entry {
        std::string key;
        std::string text;
        nlohmann::json value;
    };
    std::vector<Entry> rows;

    void add(const std::string& k, double v) { rows.push_back({k, format_real(v), v}); }
    void add(const std::string& k, std::int64_t v) { rows.push_back({k, std::to_string(v), v}); }
    void add(const std::string& k, bool v) { rows.push_back({k, v ? "true" : "false", v}); }
    void add(const std::string& k, const std::string& v) { rows.push_back({k, v, v}); }
    void add(const std::string& k, const char* v) { add(k, std::string(v)); }

    [[nodiscard]] io::CsvTable csv() const
    {
        io::CsvTable t{{"quantity", "value"}, {}};
        for (const auto& e : rows) {
            t.rows.push_back({e.key, e.text});
        }
        return t;
    }

    [[nodiscard]] nlohmann::json json() const
    {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& e : rows) {
            j[e.key] = e.value;
        }
        return j;
    }
};

inline std::string run_pmf(const RunConfig& c, bool simulated)
{
    require_family(c, {"urn", "walk"});
    DiscreteLaw law = [&] {
        if (c.family == "urn") {
            const UrnParams p = urn_params(c, c.n);
            return simulated ? simulate_urn(p, c.draws, c.seed) : urn_pmf(p);
        }
        const WalkParams p{c.n};
        return simulated ? simulate_walk_L(p, c.draws, c.seed) : walk_pmf(p);
    }();
    return emit(c.format, [&] { return io::pmf_csv(law); }, [&] { return io::to_json(law); });
}

inline std::string run_stein(const RunConfig& c)
{
    require_family(c, {"beta", "urn"});
    const BetaLaw law = c.family == "urn" ? urn_params(c, 1).limit_law() : beta_law(c);
    const SteinSolution sol = solve_stein(law, lipschitz::parse(c.test), c.grid_size);
    return emit(c.format, [&] { return io::stein_csv(sol); }, [&] { return io::to_json(sol); });
}

inline std::string run_bounds(const RunConfig& c)
{
    require_family(c, {"beta", "urn", "walk"});
    KeyValues kv;
    auto constants = [&kv, &c](const BetaLaw& law) {
        const BoundConstants bc = bound_constants(law.alpha, law.beta);
        kv.add("alpha", law.alpha.value());
        kv.add("beta", law.beta.value());
        kv.add("case", to_string(bc.case_id));
        kv.add("b0", bc.b0);
        kv.add("b1", bc.b1);
        const MonotonicityClass mc = monotonicity_classify(law.alpha, law.beta);
        kv.add("monotonicity", to_string(mc.shape));
        if (mc.turning_point) {
            kv.add("turning_point", *mc.turning_point);
        }
        if (c.usage) {
            const BoundUsage u = bound_usage(law, c.grid_size);
            kv.add("f_bound_usage", u.f_ratio);
            kv.add("f_bound_usage_test", u.f_test);
            kv.add("fprime_bound_usage", u.fprime_ratio);
            kv.add("fprime_bound_usage_test", u.fprime_test);
        }
    };
    if (c.family == "beta") {
        constants(beta_law(c));
    } else if (c.family == "urn") {
        const UrnParams p = urn_params(c, c.n);
        constants(p.limit_law());
        kv.add("upper", urn_upper_bound(p));
        kv.add("lower", urn_lower_bound(p));
    } else {
        const WalkParams p{c.n};
        constants(arcsine_law());
        kv.add("upper", arcsine_upper_bound(p));
        kv.add("moment_gap", arcsine_moment_gap(p));
    }
    return emit(c.format, [&] { return kv.csv(); }, [&] { return kv.json(); });
}

inline std::string run_distance(const RunConfig& c)
{
    require_family(c, {"urn", "walk"});
    DistanceReport r = c.family == "urn" ? urn_distance_report(urn_params(c, c.n)) : walk_distance_report({c.n});
    if (c.mc_points > 0) {
        const DiscreteLaw law = c.family == "urn" ? urn_pmf(urn_params(c, c.n)) : walk_pmf({c.n});
        const BetaLaw target = c.family == "urn" ? urn_params(c, c.n).limit_law() : arcsine_law();
        r.mc_estimate = wasserstein_grid_estimate(law, target, c.mc_points, c.seed);
    }
    KeyValues kv;
    kv.add("n", r.n);
    kv.add("dw", r.exact_dw);
    kv.add("upper", r.upper_bound);
    kv.add("lower", r.lower_bound);
    if (r.mc_estimate) {
        kv.add("mc_estimate", *r.mc_estimate);
    }
    kv.add("sandwiched", r.sandwiched());
    return emit(c.format, [&] { return kv.csv(); }, [&] { return kv.json(); });
}

inline std::string run_rate_table(const RunConfig& c)
{
    require_family(c, {"urn", "walk"});
    if (c.n_list.empty()) {
        steinbeta::detail::fail_domain("n", "rate-table needs a comma-separated list of n values");
    }
    Family family = WalkFamily{};
    if (c.family == "urn") {
        const UrnParams p = urn_params(c, c.n_list.front());
        family = UrnFamily{p.alpha, p.beta, p.m};
    }
    const auto rows = rate_table(family, c.n_list, c.threads);
    return emit(c.format, [&] { return io::rate_csv(rows); }, [&] { return io::to_json(rows); });
}

} // namespace detail

/// Runs one command. Library errors become exit codes with the message in
/// `err`; nothing is thrown.
inline RunResult run(const RunConfig& c, std::ostream& err)
{
    try {
        switch (c.command) {
        case Command::pmf: return {exit_ok, detail::run_pmf(c, false)};
        case Command::simulate: return {exit_ok, detail::run_pmf(c, true)};
        case Command::stein_solve: return {exit_ok, detail::run_stein(c)};
        case Command::bounds: return {exit_ok, detail::run_bounds(c)};
        case Command::distance: return {exit_ok, detail::run_distance(c)};
        case Command::rate_table: return {exit_ok, detail::run_rate_table(c)};
        case Command::verify: {
            const auto checks = verify::run(c.suite, {c.seed, c.grid_size});
            RunResult r;
            r.document = detail::emit(c.format, [&] { return io::verify_csv(checks); },
                                      [&] { return io::to_json(checks); });
            r.exit_code = verify::all_passed(checks) ? exit_ok : exit_verify_failed;
            if (r.exit_code != exit_ok) {
                for (const auto& ch : checks) {
                    if (!ch.pass) {
                        err << "verify: " << ch.suite << "/" << ch.check << " failed, residual "
                            << format_real(ch.residual) << " > " << format_real(ch.tolerance) << "\n";
                    }
                }
            }
            return r;
        }
        }
    } catch (const domain_error& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return {exit_invalid, {}};
    } catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return {exit_numerical, {}};
    }
    return {exit_invalid, {}};
}

/// Where the document goes: the explicit path, else
/// $STEINBETA_OUTPUT_DIR/<command>.<format>, else standard output (empty).
inline std::optional<std::filesystem::path> output_destination(const RunConfig& c, const char* env_dir)
{
    if (!c.output_path.empty()) {
        return std::filesystem::path(c.output_path);
    }
    if (env_dir != nullptr && *env_dir != '\0') {
        return std::filesystem::path(env_dir) / (std::string(command_name(c.command)) + (c.format == Format::csv ? ".csv" : ".json"));
    }
    return std::nullopt;
}

} // namespace steinbeta::cli
