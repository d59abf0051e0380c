#pragma once

#include <stdexcept>
#include <string>

namespace weave
{
enum class ErrorKind
{
        parameter,
        structural,
        numeric,
        invariant,
        divergence,
        data,
        io,
        config,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a category so the CLI can map
// it onto a distinct exit status.
class Error : public std::runtime_error
{
        ErrorKind kind_;
        std::string detail_;

public:
        Error(ErrorKind kind, const std::string& message);

        [[nodiscard]] ErrorKind kind() const noexcept
        {
                return kind_;
        }

        // Message without the category prefix.
        [[nodiscard]] const std::string& detail() const noexcept
        {
                return detail_;
        }
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message)
{
        if (!condition)
        {
                fail(kind, message);
        }
}
}
