#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace demand_pulse {

enum class ErrorKind {
    EmptyInput,
    EmptyWindow,
    TooShort,
    ZeroVariance,
    ZeroRange,
    NotAligned,
    NonMonotoneCumulative,
    DuplicateDate,
    MissingDate,
    SchemaError,
    ParseError,
    ForeignZone,
    ZeroPopulation,
    DegenerateX,
    ConfigError,
    IoError,
    MissingIntermediate,
    InvariantViolation,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure the library raises. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace demand_pulse
