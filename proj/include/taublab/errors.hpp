#pragma once

#include <stdexcept>
#include <string>

namespace taublab {

/// Raised when an operation's preconditions do not hold (empty sets, alpha
/// outside (0,1), dimension mismatches, oversized search spaces).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised on malformed textual input (rational strings, JSON files).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace taublab
