#ifndef ENTROSCOPE_CORPUS_HPP
#define ENTROSCOPE_CORPUS_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "entroscope/charspace.hpp"
#include "entroscope/detail/utf8.hpp"
#include "entroscope/error.hpp"
#include "entroscope/estimators.hpp"
#include "entroscope/metrics.hpp"

namespace entroscope {

/// Line-oriented password dataset. `entries` holds only lines that profile
/// cleanly; every other line (empty, or containing a character outside the
/// space) is counted in `skipped`. Order and duplicates are preserved.
struct Corpus {
    std::vector<std::string> entries;
    std::size_t skipped = 0;
    std::string source_label;
};

inline std::string read_all(std::istream& in)
{
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Splits on LF and strips one trailing CR per line. A final LF does not
/// start another line. Throws MalformedEncoding with the byte offset of the
/// first invalid UTF-8 sequence.
inline Corpus load_corpus(std::string_view text, std::string label, const CharSpace& space = CharSpace::english())
{
    if (auto bad = detail::first_invalid_utf8(text))
        throw Error(ErrorKind::MalformedEncoding, "invalid UTF-8 at byte offset " + std::to_string(*bad), *bad);

    Corpus corpus;
    corpus.source_label = std::move(label);
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        const bool ok = !line.empty() && std::all_of(line.begin(), line.end(),
                                                     [&](char c) { return space.contains(c); });
        if (ok)
            corpus.entries.emplace_back(line);
        else
            ++corpus.skipped;
        start = end + 1;
    }
    return corpus;
}

inline Corpus load_corpus(std::istream& in, std::string label, const CharSpace& space = CharSpace::english())
{
    return load_corpus(read_all(in), std::move(label), space);
}

/// One score per entry, in entry order. Work is split into contiguous
/// chunks, each writing only its own slice of the output.
inline std::vector<PasswordScore> score_corpus(const Corpus& corpus, const CharSpace& space = CharSpace::english(),
                                               unsigned threads = 0)
{
    const std::size_t n = corpus.entries.size();
    std::vector<PasswordScore> scores(n);
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::clamp<std::size_t>(n / 4096, 1, threads));

    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            scores[i] = score_password(corpus.entries[i], space);
    };
    if (threads == 1) {
        run(0, n);
        return scores;
    }
    std::vector<std::jthread> workers;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk)
        workers.emplace_back(run, begin, std::min(n, begin + chunk));
    workers.clear();
    return scores;
}

inline std::vector<double> expectation_entropies(std::span<const PasswordScore> scores)
{
    std::vector<double> out;
    out.reserve(scores.size());
    for (const auto& s : scores)
        out.push_back(s.expectation_entropy);
    return out;
}

/// Character frequencies over all entries, indexed like `space.members()`.
inline std::vector<std::uint64_t> char_counts(const Corpus& corpus, const CharSpace& space = CharSpace::english())
{
    std::vector<std::uint64_t> counts(space.size(), 0);
    for (const auto& entry : corpus.entries)
        for (char c : entry)
            if (auto idx = space.index_of(c))
                ++counts[*idx];
    return counts;
}

inline Distribution empirical_char_distribution(const Corpus& corpus, const CharSpace& space = CharSpace::english())
{
    if (corpus.entries.empty())
        throw Error(ErrorKind::EmptyInput, "corpus has no entries");
    return Distribution::from_counts(char_counts(corpus, space));
}

// ---------------------------------------------------------------------------
// Sample files

enum class SampleFormat { RawBytes, PackedBits, AsciiBinary };

constexpr std::string_view to_string(SampleFormat f) noexcept
{
    switch (f) {
    case SampleFormat::RawBytes: return "raw-bytes";
    case SampleFormat::PackedBits: return "packed-bits";
    case SampleFormat::AsciiBinary: return "ascii-binary";
    }
    return "?";
}

inline std::optional<SampleFormat> parse_sample_format(std::string_view name) noexcept
{
    for (auto f : {SampleFormat::RawBytes, SampleFormat::PackedBits, SampleFormat::AsciiBinary})
        if (to_string(f) == name)
            return f;
    return std::nullopt;
}

/// raw-bytes: one symbol per byte (k = 256). packed-bits: eight bits per
/// byte, most significant first (k = 2). ascii-binary: '0'/'1' with
/// whitespace ignored (k = 2).
inline SampleSequence decode_samples(std::string_view bytes, SampleFormat format)
{
    std::vector<std::uint8_t> out;
    switch (format) {
    case SampleFormat::RawBytes:
        out.assign(bytes.begin(), bytes.end());
        return SampleSequence(std::move(out), 256);
    case SampleFormat::PackedBits:
        out.reserve(bytes.size() * 8);
        for (char ch : bytes) {
            const auto b = static_cast<unsigned char>(ch);
            for (int bit = 7; bit >= 0; --bit)
                out.push_back(static_cast<std::uint8_t>((b >> bit) & 1u));
        }
        return SampleSequence(std::move(out), 2);
    case SampleFormat::AsciiBinary:
        out.reserve(bytes.size());
        for (std::size_t i = 0; i < bytes.size(); ++i) {
            switch (bytes[i]) {
            case '0': out.push_back(0); break;
            case '1': out.push_back(1); break;
            case ' ': case '\t': case '\n': case '\r': case '\v': case '\f': break;
            default:
                throw Error(ErrorKind::MalformedSample,
                            "unexpected character at byte offset " + std::to_string(i), i);
            }
        }
        return SampleSequence(std::move(out), 2);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown sample format");
}

inline SampleSequence decode_samples(std::istream& in, SampleFormat format)
{
    return decode_samples(read_all(in), format);
}

} // namespace entroscope

#endif // ENTROSCOPE_CORPUS_HPP
