#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace turan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (size limits, mismatched fields, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// File system or subprocess failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace turan
