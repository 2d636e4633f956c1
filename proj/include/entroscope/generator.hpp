#ifndef ENTROSCOPE_GENERATOR_HPP
#define ENTROSCOPE_GENERATOR_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "entroscope/charspace.hpp"
#include "entroscope/error.hpp"
#include "entroscope/random.hpp"

namespace entroscope {

enum class DatasetLabel { RandomMin, Random10ch, Random32ch, Random128ch, RandomMax, Custom };

inline constexpr std::array<DatasetLabel, 5> named_labels{DatasetLabel::RandomMin, DatasetLabel::Random10ch,
                                                          DatasetLabel::Random32ch, DatasetLabel::Random128ch,
                                                          DatasetLabel::RandomMax};

constexpr std::string_view to_string(DatasetLabel label) noexcept
{
    switch (label) {
    case DatasetLabel::RandomMin: return "RandomMin";
    case DatasetLabel::Random10ch: return "Random10ch";
    case DatasetLabel::Random32ch: return "Random32ch";
    case DatasetLabel::Random128ch: return "Random128ch";
    case DatasetLabel::RandomMax: return "RandomMax";
    case DatasetLabel::Custom: return "Custom";
    }
    return "?";
}

inline std::optional<DatasetLabel> parse_label(std::string_view name) noexcept
{
    for (auto label : named_labels)
        if (to_string(label) == name)
            return label;
    return std::nullopt;
}

/// Password length of a named dataset. RandomMin is the shortest valid
/// length min(|L|,|U|,|D|,|S|) = 10; RandomMax is 4|K| = 376, where a
/// balanced password reaches H_E = 1.
constexpr std::size_t label_length(DatasetLabel label) noexcept
{
    switch (label) {
    case DatasetLabel::RandomMin: return 10;
    case DatasetLabel::Random10ch: return 10;
    case DatasetLabel::Random32ch: return 32;
    case DatasetLabel::Random128ch: return 128;
    case DatasetLabel::RandomMax: return 376;
    case DatasetLabel::Custom: return 0;
    }
    return 0;
}

struct GenSpec {
    DatasetLabel label = DatasetLabel::Random32ch;
    std::size_t length = 32;
    std::size_t count = 1;
    bool require_valid = false;
    std::optional<std::uint64_t> seed;

    static GenSpec named(DatasetLabel label, std::size_t count, std::optional<std::uint64_t> seed = std::nullopt)
    {
        return {label, label_length(label), count, false, seed};
    }

    static GenSpec custom(std::size_t length, std::size_t count, std::optional<std::uint64_t> seed = std::nullopt)
    {
        return {DatasetLabel::Custom, length, count, false, seed};
    }
};

/// Seeded generation works in blocks of this many passwords. Block `b` draws
/// from Xoshiro256(block_seed(seed, b)), so output is independent of how
/// blocks are spread over threads.
inline constexpr std::size_t kGenerationBlock = 1024;

constexpr std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) noexcept
{
    return splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL * (block + 1));
}

namespace detail {

template <typename IndexFn>
std::string draw_password(const GenSpec& spec, const CharSpace& space, IndexFn&& next_index)
{
    std::string pw(spec.length, '\0');
    for (;;) {
        for (auto& ch : pw)
            ch = space.at(next_index(space.size()));
        if (!spec.require_valid || is_valid(profile(pw, space), space))
            return pw;
    }
}

inline void check_spec(const GenSpec& spec, const CharSpace& space)
{
    if (spec.count == 0)
        throw Error(ErrorKind::InvalidArgument, "count must be positive");
    if (spec.length == 0)
        throw Error(ErrorKind::InvalidArgument, "length must be positive");
    if (spec.label != DatasetLabel::Custom && spec.length != label_length(spec.label))
        throw Error(ErrorKind::InvalidArgument,
                    std::string(to_string(spec.label)) + " requires length " +
                        std::to_string(label_length(spec.label)));
    if (spec.require_valid && spec.length < space.min_class_size())
        throw Error(ErrorKind::InfeasibleValidity, "validity needs length >= " +
                                                       std::to_string(space.min_class_size()));
}

} // namespace detail

/// Uniform random passwords over `space`. With a seed the output is a pure
/// function of (spec, space); without one, characters come from the kernel
/// CSPRNG.
inline std::vector<std::string> generate(const GenSpec& spec, const CharSpace& space = CharSpace::english(),
                                         unsigned threads = 0)
{
    detail::check_spec(spec, space);
    std::vector<std::string> out(spec.count);

    if (!spec.seed) {
        OsEntropySource source;
        for (auto& pw : out)
            pw = detail::draw_password(spec, space, [&](std::size_t n) { return source.uniform_index(n); });
        return out;
    }

    const std::size_t blocks = (spec.count + kGenerationBlock - 1) / kGenerationBlock;
    auto run_block = [&](std::size_t b) {
        Xoshiro256 rng(block_seed(*spec.seed, b));
        auto next = [&](std::size_t n) { return static_cast<std::size_t>(uniform_below(rng, n)); };
        const std::size_t end = std::min(spec.count, (b + 1) * kGenerationBlock);
        for (std::size_t i = b * kGenerationBlock; i < end; ++i)
            out[i] = detail::draw_password(spec, space, next);
    };

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
    if (threads <= 1) {
        for (std::size_t b = 0; b < blocks; ++b)
            run_block(b);
        return out;
    }
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w)
        workers.emplace_back([&, w] {
            for (std::size_t b = w; b < blocks; b += threads)
                run_block(b);
        });
    workers.clear();
    return out;
}

/// Short, mostly lower-case passwords resembling leaked corpora: length
/// uniform in [4, 9], each character lower (80%), digit (15%) or upper (5%).
inline std::vector<std::string> generate_leaked_like(std::size_t count, std::uint64_t seed)
{
    if (count == 0)
        throw Error(ErrorKind::InvalidArgument, "count must be positive");
    const auto& space = CharSpace::english();
    Xoshiro256 rng(seed);
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto length = 4 + uniform_below(rng, 6);
        std::string pw;
        pw.reserve(length);
        for (std::uint64_t j = 0; j < length; ++j) {
            const auto roll = uniform_below(rng, 100);
            const auto cls = roll < 80 ? CharClass::Lower : roll < 95 ? CharClass::Digit : CharClass::Upper;
            const auto& members = space.members(cls);
            pw += members[uniform_below(rng, members.size())];
        }
        out.push_back(std::move(pw));
    }
    return out;
}

} // namespace entroscope

#endif // ENTROSCOPE_GENERATOR_HPP
