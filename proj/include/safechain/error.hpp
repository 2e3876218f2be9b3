#pragma once

#include <stdexcept>
#include <string>

namespace safechain {

enum class ErrorKind {
    Domain,
    Config,
    Numeric,
    SingularInputMatrix,
    UnsafeInitialState,
    AssumptionViolation,
    InfeasibleConstraint,
    Io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Same kind, message prefixed with context (e.g. the failing step index).
    Error with_context(const std::string& context) const
    {
        return Error(kind_, context + ": " + what());
    }

private:
    ErrorKind kind_;
};

}  // namespace safechain
