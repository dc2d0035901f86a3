#pragma once

#include <stdexcept>
#include <string>

namespace signstable {

// Quadrature failed to converge, a root bracket was lost, or a similar
// internal numerical failure. Mapped to exit code 2 by the CLI.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or record. Mapped to exit code 1 by the CLI.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace signstable
