#ifndef ENTROSCOPE_CHARSPACE_HPP
#define ENTROSCOPE_CHARSPACE_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "entroscope/error.hpp"

namespace entroscope {

enum class CharClass : std::uint8_t { Lower = 0, Upper = 1, Digit = 2, Symbol = 3 };

inline constexpr std::array<CharClass, 4> all_classes{CharClass::Lower, CharClass::Upper, CharClass::Digit,
                                                      CharClass::Symbol};

constexpr std::string_view to_string(CharClass c) noexcept
{
    switch (c) {
    case CharClass::Lower: return "lower";
    case CharClass::Upper: return "upper";
    case CharClass::Digit: return "digit";
    case CharClass::Symbol: return "symbol";
    }
    return "?";
}

/// Exact nonnegative fraction. Only used for class probabilities, which are
/// never reduced: `num / den` with `den` the size of the character space.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) noexcept { return a.num * b.den == b.num * a.den; }
};

/// Four disjoint byte sets making up the character space K.
///
/// The canonical instance, `CharSpace::english()`, is printable ASCII
/// 0x21-0x7E: 26 lower, 26 upper, 10 digits and the remaining 32 symbols.
/// Other spaces can be built from any four disjoint, nonempty byte sets.
class CharSpace {
public:
    CharSpace(std::string lower, std::string upper, std::string digits, std::string symbols)
        : sets_{std::move(lower), std::move(upper), std::move(digits), std::move(symbols)}
    {
        lookup_.fill(kAbsent);
        index_.fill(kAbsent);
        std::int16_t next = 0;
        for (std::size_t cls = 0; cls < sets_.size(); ++cls) {
            if (sets_[cls].empty())
                throw Error(ErrorKind::InvalidArgument, "character class " +
                                                            std::string(to_string(static_cast<CharClass>(cls))) +
                                                            " is empty");
            for (char ch : sets_[cls]) {
                auto byte = static_cast<unsigned char>(ch);
                if (lookup_[byte] != kAbsent)
                    throw Error(ErrorKind::InvalidArgument, "character classes are not disjoint");
                lookup_[byte] = static_cast<std::int16_t>(cls);
                index_[byte] = next++;
                members_.push_back(ch);
            }
        }
    }

    static const CharSpace& english()
    {
        static const CharSpace space = [] {
            std::string lower, upper, digits, symbols;
            for (int c = 0x21; c <= 0x7E; ++c) {
                auto ch = static_cast<char>(c);
                if (c >= 'a' && c <= 'z')
                    lower += ch;
                else if (c >= 'A' && c <= 'Z')
                    upper += ch;
                else if (c >= '0' && c <= '9')
                    digits += ch;
                else
                    symbols += ch;
            }
            return CharSpace(std::move(lower), std::move(upper), std::move(digits), std::move(symbols));
        }();
        return space;
    }

    std::optional<CharClass> find(char c) const noexcept
    {
        auto v = lookup_[static_cast<unsigned char>(c)];
        if (v == kAbsent)
            return std::nullopt;
        return static_cast<CharClass>(v);
    }

    bool contains(char c) const noexcept { return lookup_[static_cast<unsigned char>(c)] != kAbsent; }

    /// Position of `c` in the concatenation lower ++ upper ++ digits ++ symbols.
    std::optional<std::size_t> index_of(char c) const noexcept
    {
        auto v = index_[static_cast<unsigned char>(c)];
        if (v == kAbsent)
            return std::nullopt;
        return static_cast<std::size_t>(v);
    }

    char at(std::size_t index) const { return members_.at(index); }
    const std::string& members() const noexcept { return members_; }
    const std::string& members(CharClass c) const noexcept { return sets_[static_cast<std::size_t>(c)]; }
    std::size_t class_size(CharClass c) const noexcept { return members(c).size(); }
    std::size_t size() const noexcept { return members_.size(); }

    Rational class_probability(CharClass c) const noexcept { return {class_size(c), size()}; }

    std::size_t min_class_size() const noexcept
    {
        std::size_t m = size();
        for (const auto& s : sets_)
            m = std::min(m, s.size());
        return m;
    }

private:
    static constexpr std::int16_t kAbsent = -1;

    std::array<std::string, 4> sets_;
    std::string members_;
    std::array<std::int16_t, 256> lookup_{};
    std::array<std::int16_t, 256> index_{};
};

/// Per-class character counts of a password.
struct ClassProfile {
    std::size_t lower = 0;
    std::size_t upper = 0;
    std::size_t digit = 0;
    std::size_t symbol = 0;

    constexpr std::size_t length() const noexcept { return lower + upper + digit + symbol; }

    constexpr std::size_t count(CharClass c) const noexcept
    {
        switch (c) {
        case CharClass::Lower: return lower;
        case CharClass::Upper: return upper;
        case CharClass::Digit: return digit;
        case CharClass::Symbol: return symbol;
        }
        return 0;
    }

    constexpr std::size_t& count(CharClass c) noexcept
    {
        switch (c) {
        case CharClass::Upper: return upper;
        case CharClass::Digit: return digit;
        case CharClass::Symbol: return symbol;
        default: return lower;
        }
    }

    constexpr std::size_t classes_present() const noexcept
    {
        return (lower > 0) + (upper > 0) + (digit > 0) + (symbol > 0);
    }

    friend constexpr ClassProfile operator+(const ClassProfile& a, const ClassProfile& b) noexcept
    {
        return {a.lower + b.lower, a.upper + b.upper, a.digit + b.digit, a.symbol + b.symbol};
    }

    friend constexpr bool operator==(const ClassProfile&, const ClassProfile&) = default;
};

inline CharClass classify_char(char c, const CharSpace& space = CharSpace::english())
{
    if (auto cls = space.find(c))
        return *cls;
    throw Error(ErrorKind::OutOfSpace, "character is outside the character space");
}

/// Counts characters per class. Throws OutOfSpace carrying the index of the
/// first character not in `space`.
inline ClassProfile profile(std::string_view password, const CharSpace& space = CharSpace::english())
{
    if (password.empty())
        throw Error(ErrorKind::EmptyPassword, "password is empty");
    ClassProfile p;
    for (std::size_t i = 0; i < password.size(); ++i) {
        auto cls = space.find(password[i]);
        if (!cls)
            throw Error(ErrorKind::OutOfSpace,
                        "character at index " + std::to_string(i) + " is outside the character space", i);
        ++p.count(*cls);
    }
    return p;
}

/// At least two classes used and length no shorter than the smallest class.
inline bool is_valid(const ClassProfile& p, const CharSpace& space = CharSpace::english()) noexcept
{
    return p.classes_present() >= 2 && p.length() >= space.min_class_size();
}

} // namespace entroscope

#endif // ENTROSCOPE_CHARSPACE_HPP
