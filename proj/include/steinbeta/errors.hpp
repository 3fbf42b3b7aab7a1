#pragma once

#include <stdexcept>
#include <string>

namespace steinbeta {

/// Thrown when an argument lies outside the domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when an iterative or adaptive numerical method fails to reach its
/// tolerance within its work budget. The message carries the diagnostics.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail_domain(const std::string& where, const std::string& what)
{
    throw domain_error(where + ": " + what);
}

} // namespace detail
} // namespace steinbeta
