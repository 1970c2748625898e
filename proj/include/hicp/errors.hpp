#pragma once

#include <stdexcept>
#include <string>

namespace hicp {

enum class ErrorKind {
    RegularityViolation,
    NotClosedSurface,
    E0EndpointInV0,
    CapExceeded,
    IndexMismatch,
    DomainError,
    InvariantViolation,
    NotInTE,
    PathLeavesDomain,
    NonRedundantDiagonal,
    InvalidInput,
    IoError,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::RegularityViolation: return "RegularityViolation";
    case ErrorKind::NotClosedSurface: return "NotClosedSurface";
    case ErrorKind::E0EndpointInV0: return "E0EndpointInV0";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NotInTE: return "NotInTE";
    case ErrorKind::PathLeavesDomain: return "PathLeavesDomain";
    case ErrorKind::NonRedundantDiagonal: return "NonRedundantDiagonal";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace hicp
