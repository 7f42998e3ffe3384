#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causal
{

enum class Errc
{
    InvalidArgument,
    NonFinite,
    NonPositivePrice,
    TooShort,
    WindowTooLarge,
    LengthMismatch,
    Diverged,
    ConstantSeries,
    DegenerateDenominator,
    TooShortForEmbedding,
    DegeneratePrediction,
    OutOfRange,
    MisalignedWindows,
    ConstantHistory,
    NegativeVariance,
    InfeasibleTarget,
    NoExcessReturn,
    ParseError,
    EmptyInput,
    UnknownAsset,
    Io,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// that callers (and the CLI) can react without parsing messages.
class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string &message);

    Errc code() const noexcept { return code_; }

    /// Same code, message prefixed with a context string such as "window 12".
    Error with_context(std::string_view context) const;

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string &message);

} // namespace causal
