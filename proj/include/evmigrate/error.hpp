#pragma once

#include <stdexcept>
#include <string>

namespace evmigrate {

/// Domain or validation failure. Everything the library throws derives from this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure while reading one of the line-oriented text formats.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message)
        , line_(line)
        , message_(message)
    {
    }

    int line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

private:
    int line_;
    std::string message_;
};

} // namespace evmigrate
