#ifndef ENTROSCOPE_ERROR_HPP
#define ENTROSCOPE_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace entroscope {

enum class ErrorKind {
    OutOfSpace,
    EmptyPassword,
    DegenerateProfile,
    InvalidSize,
    InvalidDistribution,
    TooShort,
    NonBinaryInput,
    NoCollisions,
    MalformedEncoding,
    MalformedSample,
    EmptyInput,
    SinkFailure,
    EntropySourceUnavailable,
    InfeasibleValidity,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::OutOfSpace: return "OutOfSpace";
    case ErrorKind::EmptyPassword: return "EmptyPassword";
    case ErrorKind::DegenerateProfile: return "DegenerateProfile";
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::NonBinaryInput: return "NonBinaryInput";
    case ErrorKind::NoCollisions: return "NoCollisions";
    case ErrorKind::MalformedEncoding: return "MalformedEncoding";
    case ErrorKind::MalformedSample: return "MalformedSample";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SinkFailure: return "SinkFailure";
    case ErrorKind::EntropySourceUnavailable: return "EntropySourceUnavailable";
    case ErrorKind::InfeasibleValidity: return "InfeasibleValidity";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Exception type thrown by every library operation. `position()` carries the
/// offending character index or byte offset when one applies.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(message), kind_(kind), position_(position)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> position_;
};

} // namespace entroscope

#endif // ENTROSCOPE_ERROR_HPP
