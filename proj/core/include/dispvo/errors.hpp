#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dispvo {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a domain invariant (e.g. a non-rotation).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Binary container with a bad magic, version or size.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Precondition failure on function arguments (lengths, shapes, empty input).
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (hyperparameters, schedule overrun).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dispvo
