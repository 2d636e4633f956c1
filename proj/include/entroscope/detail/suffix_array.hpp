#ifndef ENTROSCOPE_DETAIL_SUFFIX_ARRAY_HPP
#define ENTROSCOPE_DETAIL_SUFFIX_ARRAY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace entroscope::detail {

/// Suffix array by prefix doubling with counting sorts, O(n log n).
/// Shorter suffixes sort before longer ones sharing the same prefix.
inline std::vector<std::uint32_t> suffix_array(std::span<const std::uint8_t> s)
{
    const std::size_t n = s.size();
    std::vector<std::uint32_t> sa(n), rank(n), tmp(n), by_second(n);
    if (n == 0)
        return sa;
    std::vector<std::uint32_t> count(std::max<std::size_t>(256, n) + 1, 0);

    for (auto c : s)
        ++count[c];
    for (std::size_t i = 1; i < 256; ++i)
        count[i] += count[i - 1];
    for (std::size_t i = n; i-- > 0;)
        sa[--count[s[i]]] = static_cast<std::uint32_t>(i);

    std::size_t classes = 1;
    rank[sa[0]] = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (s[sa[i]] != s[sa[i - 1]])
            ++classes;
        rank[sa[i]] = static_cast<std::uint32_t>(classes - 1);
    }

    for (std::size_t k = 1; classes < n; k <<= 1) {
        std::size_t p = 0;
        for (std::size_t i = n - std::min(k, n); i < n; ++i)
            by_second[p++] = static_cast<std::uint32_t>(i);
        for (std::size_t j = 0; j < n; ++j)
            if (sa[j] >= k)
                by_second[p++] = static_cast<std::uint32_t>(sa[j] - k);

        std::fill(count.begin(), count.begin() + static_cast<std::ptrdiff_t>(classes), 0);
        for (std::size_t i = 0; i < n; ++i)
            ++count[rank[i]];
        for (std::size_t i = 1; i < classes; ++i)
            count[i] += count[i - 1];
        for (std::size_t j = n; j-- > 0;)
            sa[--count[rank[by_second[j]]]] = by_second[j];

        auto second = [&](std::uint32_t i) -> std::uint64_t { return i + k < n ? rank[i + k] + 1ULL : 0ULL; };
        tmp[sa[0]] = 0;
        classes = 1;
        for (std::size_t j = 1; j < n; ++j) {
            if (rank[sa[j]] != rank[sa[j - 1]] || second(sa[j]) != second(sa[j - 1]))
                ++classes;
            tmp[sa[j]] = static_cast<std::uint32_t>(classes - 1);
        }
        std::swap(rank, tmp);
    }
    return sa;
}

/// Kasai et al.: lcp[i] = longest common prefix of suffixes sa[i-1] and sa[i]; lcp[0] = 0.
inline std::vector<std::uint32_t> lcp_array(std::span<const std::uint8_t> s, std::span<const std::uint32_t> sa)
{
    const std::size_t n = s.size();
    std::vector<std::uint32_t> rank(n), lcp(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        rank[sa[i]] = static_cast<std::uint32_t>(i);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::size_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && s[i + h] == s[j + h])
            ++h;
        lcp[rank[i]] = static_cast<std::uint32_t>(h);
        if (h > 0)
            --h;
    }
    return lcp;
}

/// counts[t] = occurrences (overlapping) of the most frequent length-t
/// substring, for 1 <= t <= min(max_t, n). counts[0] is unused.
///
/// Every LCP interval with depth h and w suffixes witnesses a substring of
/// each length t <= h occurring w times; a stack walk over the LCP array
/// visits all of them in O(n).
inline std::vector<std::size_t> max_tuple_counts(std::span<const std::uint8_t> s, std::size_t max_t)
{
    const std::size_t n = s.size();
    const std::size_t limit = std::min(max_t, n);
    std::vector<std::size_t> counts(limit + 1, 0);
    if (n == 0)
        return counts;

    const auto sa = suffix_array(s);
    const auto lcp = lcp_array(s, sa);

    std::vector<std::size_t> best(n + 1, 1);
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
    for (std::size_t i = 1; i <= n; ++i) {
        const std::uint32_t h = i < n ? lcp[i] : 0;
        std::size_t left = i - 1;
        while (stack.back().first > h) {
            const auto [depth, lb] = stack.back();
            stack.pop_back();
            best[depth] = std::max(best[depth], i - lb);
            left = lb;
        }
        if (stack.back().first < h)
            stack.emplace_back(h, left);
    }

    std::size_t running = 1;
    for (std::size_t t = n; t >= 1; --t) {
        running = std::max(running, best[t]);
        if (t <= limit)
            counts[t] = running;
    }
    return counts;
}

} // namespace entroscope::detail

#endif // ENTROSCOPE_DETAIL_SUFFIX_ARRAY_HPP
