#ifndef ENTROSCOPE_RANDOM_HPP
#define ENTROSCOPE_RANDOM_HPP

#include <array>
#include <cerrno>
#include <cstddef>
#include <cstdint>
#include <limits>

#include <sys/random.h>

#include "entroscope/error.hpp"

namespace entroscope {

/// SplitMix64 finalizer (Steele, Lea, Flood).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t operator()() noexcept
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state_);
    }

private:
    std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman, Vigna), state filled from SplitMix64(seed).
/// Pure integer arithmetic, so seeded output is identical on every platform.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256(std::uint64_t seed) noexcept
    {
        SplitMix64 sm(seed);
        for (auto& word : s_)
            word = sm();
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

/// Uniform integer in [0, bound) by rejecting the top partial range of 2^64.
/// Unlike std::uniform_int_distribution, the mapping is fixed, so seeded
/// streams are reproducible across standard libraries.
template <typename Rng>
constexpr std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) noexcept
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Buffered reader over the kernel CSPRNG (getrandom(2)).
class OsEntropySource {
public:
    OsEntropySource() { refill(); }

    std::uint8_t next_byte()
    {
        if (pos_ == buffer_.size())
            refill();
        return buffer_[pos_++];
    }

    /// Uniform index in [0, bound) for bound <= 256, rejecting bytes at or
    /// above the largest multiple of `bound` so no residue is favoured.
    std::size_t uniform_index(std::size_t bound)
    {
        if (bound == 0 || bound > 256)
            throw Error(ErrorKind::InvalidArgument, "byte-range sampling needs 1 <= bound <= 256");
        const std::size_t limit = 256 - 256 % bound;
        for (;;) {
            const std::size_t b = next_byte();
            if (b < limit)
                return b % bound;
        }
    }

private:
    void refill()
    {
        std::size_t filled = 0;
        while (filled < buffer_.size()) {
            const auto n = ::getrandom(buffer_.data() + filled, buffer_.size() - filled, 0);
            if (n < 0) {
                if (errno == EINTR)
                    continue;
                throw Error(ErrorKind::EntropySourceUnavailable, "operating-system entropy source unavailable");
            }
            filled += static_cast<std::size_t>(n);
        }
        pos_ = 0;
    }

    std::array<std::uint8_t, 4096> buffer_{};
    std::size_t pos_ = 0;
};

} // namespace entroscope

#endif // ENTROSCOPE_RANDOM_HPP
