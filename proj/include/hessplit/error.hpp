#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hessplit {

enum class ErrorCode {
    EmptyInput,
    MalformedRow,
    NonUniformGrid,
    NegativePower,
    TooFewSamples,
    NotAMultiple,
    UpsamplingForbidden,
    AllZeroProfile,
    InvalidArgument,
    EmptyValues,
    NotSymmetricHistogram,
    IncompatibleResolution,
    InvalidConfig,
    WindowOutOfRange,
    ResolutionTooCoarse,
    InconsistentInputs,
    InvalidSpec,
    InvalidRange,
    InvariantViolation,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hessplit
