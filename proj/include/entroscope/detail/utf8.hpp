#ifndef ENTROSCOPE_DETAIL_UTF8_HPP
#define ENTROSCOPE_DETAIL_UTF8_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace entroscope::detail {

/// Byte offset of the first ill-formed UTF-8 sequence, if any. Rejects
/// overlong forms, surrogates and code points above U+10FFFF.
inline std::optional<std::size_t> first_invalid_utf8(std::string_view text) noexcept
{
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = s[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        unsigned char lo = 0x80, hi = 0xBF;
        if (c >= 0xC2 && c <= 0xDF) {
            len = 2;
        } else if (c >= 0xE0 && c <= 0xEF) {
            len = 3;
            if (c == 0xE0)
                lo = 0xA0;
            else if (c == 0xED)
                hi = 0x9F;
        } else if (c >= 0xF0 && c <= 0xF4) {
            len = 4;
            if (c == 0xF0)
                lo = 0x90;
            else if (c == 0xF4)
                hi = 0x8F;
        } else {
            return i;
        }
        if (i + len > n)
            return i;
        if (s[i + 1] < lo || s[i + 1] > hi)
            return i;
        for (std::size_t k = 2; k < len; ++k)
            if (s[i + k] < 0x80 || s[i + k] > 0xBF)
                return i;
        i += len;
    }
    return std::nullopt;
}

} // namespace entroscope::detail

#endif // ENTROSCOPE_DETAIL_UTF8_HPP
