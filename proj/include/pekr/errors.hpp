#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pekr {

// Base for every recoverable error raised by the library. Callers that only
// need a message can catch this; the CLI maps it to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverlapError : public Error { using Error::Error; };
class CoverError : public Error { using Error::Error; };
class EmptyBlockError : public Error { using Error::Error; };
class LimitError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class ElementError : public Error { using Error::Error; };
class EmptyFamilyError : public Error { using Error::Error; };
class NotIntersectingError : public Error { using Error::Error; };
class PremiseNotMet : public Error { using Error::Error; };
class UnknownLemmaError : public Error { using Error::Error; };
class TimeoutError : public Error { using Error::Error; };
class HeaderMismatch : public Error { using Error::Error; };
class DuplicateMember : public Error { using Error::Error; };

// A self-check inside the library failed. Never expected; signals a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          detail_(what), line_(line), column_(column) {}

    const std::string& detail() const noexcept { return detail_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string detail_;
    std::size_t line_;
    std::size_t column_;
};

} // namespace pekr
