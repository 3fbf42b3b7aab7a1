#pragma once

#include <charconv>
#include <string>

namespace steinbeta {

/// Shortest decimal form that parses back to the same double.
inline std::string format_real(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

} // namespace steinbeta
