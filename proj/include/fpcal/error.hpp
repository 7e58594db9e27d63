#pragma once

#include <stdexcept>
#include <string>

namespace fpcal {

/// Bad data or an invariant violation in caller-supplied input.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Text input that could not be parsed; carries the 1-based line number (0 when unknown).
class ParseError : public InvalidInput {
public:
    ParseError(std::size_t line, const std::string& what)
        : InvalidInput(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A numerical routine could not produce a meaningful result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fpcal
