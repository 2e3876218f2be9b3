#include "safechain/error.hpp"

namespace safechain {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Numeric: return "numeric error";
    case ErrorKind::SingularInputMatrix: return "singular input matrix";
    case ErrorKind::UnsafeInitialState: return "unsafe initial state";
    case ErrorKind::AssumptionViolation: return "assumption violation";
    case ErrorKind::InfeasibleConstraint: return "infeasible constraint";
    case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

}  // namespace safechain
