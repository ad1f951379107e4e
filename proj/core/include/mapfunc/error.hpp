#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mapfunc {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    IoError,
    KillingUnsupported,
    NotConvergent,
    PositiveDrift,
    SubcriticalityViolated,
    WindowTooDeep,
    NotOfType,
    EpsilonOutOfRange,
    EpsilonTooLarge,
    LevelTooSmall,
    OneSidedSample,
    EmptySample,
    SampleTooSmall,
    TooFewExceedances,
    KOutOfRange,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library failure carrying a machine-readable code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message)
{
    if (!condition)
        fail(code, message);
}

}  // namespace mapfunc
