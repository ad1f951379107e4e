#include "mapfunc/error.hpp"

namespace mapfunc {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::KillingUnsupported: return "KillingUnsupported";
        case ErrorCode::NotConvergent: return "NotConvergent";
        case ErrorCode::PositiveDrift: return "PositiveDrift";
        case ErrorCode::SubcriticalityViolated: return "SubcriticalityViolated";
        case ErrorCode::WindowTooDeep: return "WindowTooDeep";
        case ErrorCode::NotOfType: return "NotOfType";
        case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
        case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
        case ErrorCode::LevelTooSmall: return "LevelTooSmall";
        case ErrorCode::OneSidedSample: return "OneSidedSample";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::SampleTooSmall: return "SampleTooSmall";
        case ErrorCode::TooFewExceedances: return "TooFewExceedances";
        case ErrorCode::KOutOfRange: return "KOutOfRange";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

}  // namespace mapfunc
