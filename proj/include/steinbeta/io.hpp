#pragma once

// CSV and JSON serialization.
//
// CSV schemas:
//   pmf     k,mass
//   stein   w,f,fprime
//   rate    n,dw,n_dw,upper,lower
//   verify  suite,check,residual,pass
//
// Reals are written in the shortest form that parses back to the same double.

#include "steinbeta/discrete_law.hpp"
#include "steinbeta/errors.hpp"
#include "steinbeta/format.hpp"
#include "steinbeta/stein_beta.hpp"
#include "steinbeta/verify.hpp"
#include "steinbeta/wasserstein.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace steinbeta::io {

using steinbeta::format_real;

inline double parse_real(const std::string& s)
{
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw domain_error("parse_real: not a number: '" + s + "'");
    }
    return x;
}

inline std::int64_t parse_integer(const std::string& s)
{
    std::int64_t x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw domain_error("parse_integer: not an integer: '" + s + "'");
    }
    return x;
}

/// A header row plus string cells. Cells never contain commas or newlines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& os, const CsvTable& table)
{
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].find_first_of(",\r\n") != std::string::npos) {
                throw domain_error("write_csv: cell '" + cells[i] + "' contains a separator");
            }
            if (i > 0) {
                os << ',';
            }
            os << cells[i];
        }
        os << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) {
        line(r);
    }
}

inline std::string to_csv_string(const CsvTable& table)
{
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
}

inline CsvTable read_csv(std::istream& is)
{
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size()) {
                throw domain_error("read_csv: row has " + std::to_string(cells.size()) + " cells, header has "
                                   + std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

inline void expect_header(const CsvTable& t, const std::vector<std::string>& header)
{
    if (t.header != header) {
        throw domain_error("csv: unexpected header");
    }
}

// pmf --------------------------------------------------------------------------

inline const std::vector<std::string> pmf_header{"k", "mass"};

inline CsvTable pmf_csv(const DiscreteLaw& law)
{
    CsvTable t{pmf_header, {}};
    for (std::int64_t k = law.support_lo(); k <= law.support_hi(); ++k) {
        t.rows.push_back({std::to_string(k), format_real(law.mass(k))});
    }
    return t;
}

struct PmfRow {
    std::int64_t k = 0;
    double mass = 0.0;
};

inline std::vector<PmfRow> parse_pmf(const CsvTable& t)
{
    expect_header(t, pmf_header);
    std::vector<PmfRow> out;
    for (const auto& r : t.rows) {
        out.push_back({parse_integer(r[0]), parse_real(r[1])});
    }
    return out;
}

inline CsvTable pmf_csv(const std::vector<PmfRow>& rows)
{
    CsvTable t{pmf_header, {}};
    for (const auto& r : rows) {
        t.rows.push_back({std::to_string(r.k), format_real(r.mass)});
    }
    return t;
}

inline nlohmann::json to_json(const DiscreteLaw& law)
{
    return {{"support_lo", law.support_lo()},
            {"scale", law.scale()},
            {"masses", std::vector<double>(law.masses().begin(), law.masses().end())}};
}

inline DiscreteLaw discrete_law_from_json(const nlohmann::json& j)
{
    return DiscreteLaw::from_masses(j.at("support_lo").get<std::int64_t>(), j.at("masses").get<std::vector<double>>(),
                                    j.at("scale").get<double>());
}

// stein ------------------------------------------------------------------------

inline const std::vector<std::string> stein_header{"w", "f", "fprime"};

inline CsvTable stein_csv(const SteinSolution& sol)
{
    CsvTable t{stein_header, {}};
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        t.rows.push_back({format_real(sol.grid[i]), format_real(sol.f_values[i]), format_real(sol.fprime_values[i])});
    }
    return t;
}

inline nlohmann::json to_json(const SteinSolution& sol)
{
    return {{"alpha", sol.law.alpha.value()},
            {"beta", sol.law.beta.value()},
            {"test", sol.test.name},
            {"bh", sol.bh},
            {"w", sol.grid},
            {"f", sol.f_values},
            {"fprime", sol.fprime_values}};
}

// rate -------------------------------------------------------------------------

inline const std::vector<std::string> rate_header{"n", "dw", "n_dw", "upper", "lower"};

inline CsvTable rate_csv(const std::vector<RateRow>& rows)
{
    CsvTable t{rate_header, {}};
    for (const auto& r : rows) {
        t.rows.push_back(
            {std::to_string(r.n), format_real(r.dw), format_real(r.n_dw), format_real(r.upper), format_real(r.lower)});
    }
    return t;
}

inline std::vector<RateRow> parse_rate(const CsvTable& t)
{
    expect_header(t, rate_header);
    std::vector<RateRow> out;
    for (const auto& r : t.rows) {
        out.push_back({parse_integer(r[0]), parse_real(r[1]), parse_real(r[2]), parse_real(r[3]), parse_real(r[4])});
    }
    return out;
}

inline nlohmann::json to_json(const std::vector<RateRow>& rows)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"n", r.n}, {"dw", r.dw}, {"n_dw", r.n_dw}, {"upper", r.upper}, {"lower", r.lower}});
    }
    return arr;
}

// verify -----------------------------------------------------------------------

inline const std::vector<std::string> verify_header{"suite", "check", "residual", "pass"};

inline CsvTable verify_csv(const std::vector<verify::Check>& checks)
{
    CsvTable t{verify_header, {}};
    for (const auto& c : checks) {
        t.rows.push_back({c.suite, c.check, format_real(c.residual), c.pass ? "true" : "false"});
    }
    return t;
}

struct VerifyRow {
    std::string suite;
    std::string check;
    double residual = 0.0;
    bool pass = false;
};

inline std::vector<VerifyRow> parse_verify(const CsvTable& t)
{
    expect_header(t, verify_header);
    std::vector<VerifyRow> out;
    for (const auto& r : t.rows) {
        if (r[3] != "true" && r[3] != "false") {
            throw domain_error("parse_verify: pass must be 'true' or 'false', got '" + r[3] + "'");
        }
        out.push_back({r[0], r[1], parse_real(r[2]), r[3] == "true"});
    }
    return out;
}

inline CsvTable verify_csv(const std::vector<VerifyRow>& rows)
{
    CsvTable t{verify_header, {}};
    for (const auto& r : rows) {
        t.rows.push_back({r.suite, r.check, format_real(r.residual), r.pass ? "true" : "false"});
    }
    return t;
}

inline nlohmann::json to_json(const std::vector<verify::Check>& checks)
{
    auto arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"suite", c.suite},
                       {"check", c.check},
                       {"residual", c.residual},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
    }
    return arr;
}

} // namespace steinbeta::io
