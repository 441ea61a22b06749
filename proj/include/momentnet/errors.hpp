#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace momentnet {

/// Malformed text input. Carries the 1-based line number where parsing failed
/// (0 when the failure is not tied to a line).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a structural invariant (self-loop, duplicate edge, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical failure during an iterative computation (non-finite values, divergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace momentnet
