#include "causal/error.hpp"

namespace causal
{

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NonPositivePrice: return "NonPositivePrice";
    case Errc::TooShort: return "TooShort";
    case Errc::WindowTooLarge: return "WindowTooLarge";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::Diverged: return "Diverged";
    case Errc::ConstantSeries: return "ConstantSeries";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::TooShortForEmbedding: return "TooShortForEmbedding";
    case Errc::DegeneratePrediction: return "DegeneratePrediction";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::MisalignedWindows: return "MisalignedWindows";
    case Errc::ConstantHistory: return "ConstantHistory";
    case Errc::NegativeVariance: return "NegativeVariance";
    case Errc::InfeasibleTarget: return "InfeasibleTarget";
    case Errc::NoExcessReturn: return "NoExcessReturn";
    case Errc::ParseError: return "ParseError";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::UnknownAsset: return "UnknownAsset";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string &message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code)
{
}

Error Error::with_context(std::string_view context) const
{
    // Strip our own "<code>: " prefix so it is not repeated.
    std::string msg = what();
    const auto prefix = std::string(errc_name(code_)) + ": ";
    if (msg.rfind(prefix, 0) == 0) {
        msg.erase(0, prefix.size());
    }
    return Error(code_, std::string(context) + ": " + msg);
}

void fail(Errc code, const std::string &message)
{
    throw Error(code, message);
}

} // namespace causal
