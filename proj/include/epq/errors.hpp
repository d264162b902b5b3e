#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epq {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two structures (or a sentence and a structure) disagree on their signature.
class SignatureMismatch : public Error {
public:
    using Error::Error;
};

/// An input violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A configured search or size budget was exhausted.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
        : Error(format(message, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column) {
        if (line == 0) return message;
        return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

} // namespace epq
