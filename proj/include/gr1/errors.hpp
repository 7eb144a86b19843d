#pragma once

#include <stdexcept>
#include <string>

namespace gr1 {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Node budget or deadline exhausted. Distinct from unrealizability.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

/// A specification that cannot be parsed or compiled.
class SpecError : public Error {
public:
    SpecError(const std::string& message, int line = 0, int column = 0)
        : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message
                         : message),
          line_(line),
          column_(column),
          message_(message) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& bare_message() const { return message_; }

private:
    int line_;
    int column_;
    std::string message_;
};

/// An operation called outside its precondition (e.g. strategy extraction on
/// an unrealizable game).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace gr1
