#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rexincl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pattern text is not valid in the supported dialect.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Non-regular construct (backreferences, conditionals).
class UnsupportedFeature : public Error {
public:
    using Error::Error;
};

class MalformedExpression : public Error {
public:
    using Error::Error;
};

class AlphabetMismatch : public Error {
public:
    using Error::Error;
};

class IncompleteAutomaton : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateId : public Error {
public:
    using Error::Error;
};

class BoundExceeded : public Error {
public:
    using Error::Error;
};

// Full and reduced rule sets classified some sentence differently.
class OutcomeMismatch : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace rexincl
