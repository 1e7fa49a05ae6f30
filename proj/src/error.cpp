#include "demand_pulse/error.hpp"

namespace demand_pulse {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::EmptyWindow: return "EmptyWindow";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::ZeroRange: return "ZeroRange";
        case ErrorKind::NotAligned: return "NotAligned";
        case ErrorKind::NonMonotoneCumulative: return "NonMonotoneCumulative";
        case ErrorKind::DuplicateDate: return "DuplicateDate";
        case ErrorKind::MissingDate: return "MissingDate";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ForeignZone: return "ForeignZone";
        case ErrorKind::ZeroPopulation: return "ZeroPopulation";
        case ErrorKind::DegenerateX: return "DegenerateX";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::MissingIntermediate: return "MissingIntermediate";
        case ErrorKind::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

}  // namespace demand_pulse
