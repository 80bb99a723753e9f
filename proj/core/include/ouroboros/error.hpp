#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ouroboros {

enum class ErrorCode {
    DuplicateId,
    InvalidSchema,
    UnknownSchema,
    ParseError,
    IoError,
    DepthExceeded,
    CapacityExceeded,
    NoCurrentSchema,
    EmptyWindow,
    NoInitialFeature,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// A malformed line in a line-oriented input file. Line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + reason),
          line_(line),
          reason_(reason) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

}  // namespace ouroboros
