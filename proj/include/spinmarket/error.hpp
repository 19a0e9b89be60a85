#pragma once

#include <stdexcept>
#include <string>

namespace spinmarket {

enum class ErrorCode {
    InvalidParams,
    SizeMismatch,
    InsufficientTail,
    DegenerateTail,
    DegenerateSeries,
    MissingSnapshots,
    Format,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace spinmarket
