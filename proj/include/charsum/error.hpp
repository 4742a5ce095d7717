#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace charsum {

enum class ErrorKind {
    NotPrime,
    CapExceeded,
    ZeroArgument,
    FieldMismatch,
    TrivialCharacter,
    NotDivisible,
    InvalidArgument,
    NotAHyperplane,
    RankDeficient,
    NotInPosition,
    DegreeMismatch,
    NotIntegral,
    NonConvergence,
    BoundViolated,
    ConfigInvalid,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::ZeroArgument: return "ZeroArgument";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::TrivialCharacter: return "TrivialCharacter";
        case ErrorKind::NotDivisible: return "NotDivisible";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NotAHyperplane: return "NotAHyperplane";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::NotInPosition: return "NotInPosition";
        case ErrorKind::DegreeMismatch: return "DegreeMismatch";
        case ErrorKind::NotIntegral: return "NotIntegral";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::BoundViolated: return "BoundViolated";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace charsum
