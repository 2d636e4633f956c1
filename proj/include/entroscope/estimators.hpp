#ifndef ENTROSCOPE_ESTIMATORS_HPP
#define ENTROSCOPE_ESTIMATORS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "entroscope/detail/suffix_array.hpp"
#include "entroscope/error.hpp"

namespace entroscope {

/// Symbols in [0, alphabet_size), 2 <= alphabet_size <= 256.
class SampleSequence {
public:
    SampleSequence(std::vector<std::uint8_t> samples, unsigned alphabet_size)
        : samples_(std::move(samples)), alphabet_size_(alphabet_size)
    {
        if (alphabet_size < 2 || alphabet_size > 256)
            throw Error(ErrorKind::InvalidArgument, "alphabet size must be in [2, 256]");
        for (std::size_t i = 0; i < samples_.size(); ++i)
            if (samples_[i] >= alphabet_size)
                throw Error(ErrorKind::MalformedSample,
                            "sample " + std::to_string(i) + " exceeds the alphabet", i);
    }

    std::span<const std::uint8_t> samples() const noexcept { return samples_; }
    unsigned alphabet_size() const noexcept { return alphabet_size_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool is_binary() const noexcept { return alphabet_size_ == 2; }

private:
    std::vector<std::uint8_t> samples_;
    unsigned alphabet_size_;
};

enum class Estimator { Mcv, Collision, Markov, Compression, Tuple };

inline constexpr std::array<Estimator, 5> all_estimators{Estimator::Mcv, Estimator::Collision, Estimator::Markov,
                                                         Estimator::Compression, Estimator::Tuple};

constexpr std::string_view to_string(Estimator e) noexcept
{
    switch (e) {
    case Estimator::Mcv: return "mcv";
    case Estimator::Collision: return "collision";
    case Estimator::Markov: return "markov";
    case Estimator::Compression: return "compression";
    case Estimator::Tuple: return "tuple";
    }
    return "?";
}

inline std::optional<Estimator> parse_estimator(std::string_view name) noexcept
{
    for (auto e : all_estimators)
        if (to_string(e) == name)
            return e;
    return std::nullopt;
}

constexpr bool binary_only(Estimator e) noexcept
{
    return e == Estimator::Collision || e == Estimator::Markov || e == Estimator::Compression;
}

/// `statistic` and `bound` per estimator:
///   mcv          most common proportion, its 99% upper bound
///   collision    mean collision time, its 99% lower bound
///   markov       probability of the most likely 128-sample path (no bound; repeated)
///   compression  mean log2 recurrence gap, its 99% lower bound
///   tuple        max over t of the t-th-root tuple proportion, max of the 99% upper bounds
struct EstimateResult {
    Estimator estimator = Estimator::Mcv;
    double min_entropy = 0.0;
    double statistic = 0.0;
    double bound = 0.0;
    std::vector<std::string> warnings;
};

struct EstimatorOptions {
    /// Downgrade minimum-length violations to warnings.
    bool allow_short = false;
    std::size_t max_tuple = std::numeric_limits<std::size_t>::max();
};

inline constexpr double kZ99 = 2.576;
inline constexpr std::size_t kMinLengthCollision = 1000;
inline constexpr std::size_t kMinLengthMarkov = 1000;
inline constexpr std::size_t kMinLengthTuple = 1000;
inline constexpr std::size_t kMinLengthCompression = 100'000;
inline constexpr std::size_t kRecommendedLengthCompression = 1'000'000;
inline constexpr std::size_t kMarkovPathLength = 128;
inline constexpr std::size_t kTupleCutoff = 35;
inline constexpr double kBisectionTolerance = 1e-9;
inline constexpr int kBisectionMaxIterations = 200;

namespace detail {

inline void require_binary(const SampleSequence& seq, Estimator e)
{
    if (!seq.is_binary())
        throw Error(ErrorKind::NonBinaryInput, std::string(to_string(e)) + " estimate needs binary input");
}

inline void require_length(const SampleSequence& seq, std::size_t minimum, Estimator e,
                           const EstimatorOptions& opts, std::vector<std::string>& warnings)
{
    if (seq.size() >= minimum)
        return;
    std::string msg = std::string(to_string(e)) + " estimate needs at least " + std::to_string(minimum) +
                      " samples, got " + std::to_string(seq.size());
    if (!opts.allow_short)
        throw Error(ErrorKind::TooShort, msg);
    warnings.push_back(std::move(msg));
}

inline double clamp_entropy(double h, unsigned alphabet_size) noexcept
{
    return std::clamp(h, 0.0, std::log2(static_cast<double>(alphabet_size))) + 0.0;
}

inline double upper_bound_99(double p, std::size_t n) noexcept
{
    return std::min(1.0, p + kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(n - 1)));
}

} // namespace detail

/// Solves f(p) = target on [lo, hi] for f decreasing, by bisection to
/// kBisectionTolerance on p. Returns lo when target >= f(lo) and hi when
/// target <= f(hi).
template <typename F>
double solve_decreasing(F&& f, double target, double lo, double hi)
{
    if (target >= f(lo))
        return lo;
    if (target <= f(hi))
        return hi;
    for (int i = 0; i < kBisectionMaxIterations && hi - lo > kBisectionTolerance; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Most common value

inline EstimateResult mcv_estimate(const SampleSequence& seq, const EstimatorOptions& /*opts*/ = {})
{
    EstimateResult r;
    r.estimator = Estimator::Mcv;
    if (seq.size() < 2)
        throw Error(ErrorKind::TooShort, "mcv estimate needs at least 2 samples");
    std::array<std::size_t, 256> counts{};
    for (auto s : seq.samples())
        ++counts[s];
    const auto mode = *std::max_element(counts.begin(), counts.end());
    r.statistic = static_cast<double>(mode) / static_cast<double>(seq.size());
    r.bound = detail::upper_bound_99(r.statistic, seq.size());
    r.min_entropy = detail::clamp_entropy(-std::log2(r.bound), seq.alphabet_size());
    return r;
}

// ---------------------------------------------------------------------------
// Collision

/// Mean time to the first repeated value for a binary source whose most
/// likely value has probability p. The Hagerty-Draper relation
///   p q^-2 (1 + (1/p - 1/q)/2) F(q) - p q^-1 (1/p - 1/q)/2,
///   F(1/z) = Gamma(3, z) z^-3 e^z,
/// collapses for two symbols to 2 + 2pq.
inline double collision_expected_time(double p) noexcept { return 2.0 + 2.0 * p * (1.0 - p); }

/// Largest p in [1/2, 1] whose expected collision time equals `mean`.
inline double collision_solve(double mean)
{
    return solve_decreasing(collision_expected_time, mean, 0.5, 1.0);
}

inline EstimateResult collision_estimate(const SampleSequence& seq, const EstimatorOptions& opts = {})
{
    EstimateResult r;
    r.estimator = Estimator::Collision;
    detail::require_binary(seq, Estimator::Collision);
    detail::require_length(seq, kMinLengthCollision, Estimator::Collision, opts, r.warnings);

    const auto s = seq.samples();
    std::vector<double> times;
    times.reserve(s.size() / 2);
    for (std::size_t i = 0; i + 1 < s.size();) {
        if (s[i] == s[i + 1]) {
            times.push_back(2.0);
            i += 2;
        } else if (i + 2 < s.size()) {
            times.push_back(3.0);
            i += 3;
        } else {
            break;
        }
    }
    if (times.empty())
        throw Error(ErrorKind::NoCollisions, "no collision found in the input");
    if (times.size() < 2)
        throw Error(ErrorKind::TooShort, "collision estimate needs at least two collisions");

    const double v = static_cast<double>(times.size());
    double mean = 0.0;
    for (double t : times)
        mean += t;
    mean /= v;
    double ss = 0.0;
    for (double t : times)
        ss += (t - mean) * (t - mean);
    const double sigma = std::sqrt(ss / (v - 1.0));

    r.statistic = mean;
    r.bound = mean - kZ99 * sigma / std::sqrt(v);
    const double p = collision_solve(r.bound);
    r.min_entropy = detail::clamp_entropy(-std::log2(p), 2);
    return r;
}

// ---------------------------------------------------------------------------
// Markov (first order)

inline EstimateResult markov_estimate(const SampleSequence& seq, const EstimatorOptions& opts = {})
{
    EstimateResult r;
    r.estimator = Estimator::Markov;
    detail::require_binary(seq, Estimator::Markov);
    detail::require_length(seq, kMinLengthMarkov, Estimator::Markov, opts, r.warnings);
    const auto s = seq.samples();
    if (s.size() < 2)
        throw Error(ErrorKind::TooShort, "markov estimate needs at least 2 samples");

    std::array<double, 2> initial{};
    std::array<std::array<double, 2>, 2> trans{};
    for (auto x : s)
        initial[x] += 1.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        trans[s[i]][s[i + 1]] += 1.0;
    for (auto& p : initial)
        p /= static_cast<double>(s.size());
    for (auto& row : trans) {
        const double total = row[0] + row[1];
        for (auto& p : row)
            p = total > 0.0 ? p / total : 0.0;
    }

    // Most likely path of kMarkovPathLength samples, in log2 space.
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    auto lg = [&](double p) { return p > 0.0 ? std::log2(p) : neg_inf; };
    std::array<double, 2> best{lg(initial[0]), lg(initial[1])};
    for (std::size_t step = 1; step < kMarkovPathLength; ++step) {
        std::array<double, 2> next{};
        for (int to = 0; to < 2; ++to)
            next[to] = std::max(best[0] + lg(trans[0][to]), best[1] + lg(trans[1][to]));
        best = next;
    }
    const double log_pmax = std::max(best[0], best[1]);

    // Reported as -log2(p_max) in bits per path; p_max itself underflows
    // any fixed-point rendering.
    r.statistic = -log_pmax + 0.0;
    r.bound = r.statistic;
    r.min_entropy = detail::clamp_entropy(-log_pmax / static_cast<double>(kMarkovPathLength), 2);
    return r;
}

// ---------------------------------------------------------------------------
// Compression (Maurer universal statistic)

struct CompressionLayout {
    std::size_t blocks = 0;
    std::size_t dictionary = 1000;
    unsigned block_bits = 6;
};

/// Expected mean log2 recurrence gap contributed by a symbol of probability z,
/// summed over the tested blocks d+1..n:
///   (1/nu) sum_t sum_{u<=t} log2(u) F(z, t, u),
///   F = z^2 (1-z)^(u-1) for u < t,  z (1-z)^(t-1) for u = t.
/// Evaluated in O(n) by counting, for each gap u, how many t exceed it.
inline double compression_symbol_term(double z, const CompressionLayout& layout)
{
    const std::size_t n = layout.blocks;
    const std::size_t d = layout.dictionary;
    const double nu = static_cast<double>(n - d);
    if (z <= 0.0)
        return 0.0;
    const double keep = 1.0 - z;
    const double scale = z * static_cast<double>(n) * std::log2(static_cast<double>(n));
    double w = 1.0;
    double sum = 0.0;
    for (std::size_t u = 1; u <= n; ++u) {
        const double lg = std::log2(static_cast<double>(u));
        if (u < n)
            sum += lg * z * z * w * static_cast<double>(n - std::max(u, d));
        if (u > d)
            sum += lg * z * w;
        w *= keep;
        if (w * scale < 1e-18)
            break;
    }
    return sum / nu;
}

/// Expected statistic when one block value has probability p and the other
/// 2^b - 1 share the rest equally.
inline double compression_expected(double p, const CompressionLayout& layout)
{
    const double others = std::exp2(static_cast<double>(layout.block_bits)) - 1.0;
    return compression_symbol_term(p, layout) + others * compression_symbol_term((1.0 - p) / others, layout);
}

inline double compression_solve(double statistic, const CompressionLayout& layout)
{
    const double lo = std::exp2(-static_cast<double>(layout.block_bits));
    return solve_decreasing([&](double p) { return compression_expected(p, layout); }, statistic, lo, 1.0);
}

inline EstimateResult compression_estimate(const SampleSequence& seq, const EstimatorOptions& opts = {})
{
    EstimateResult r;
    r.estimator = Estimator::Compression;
    detail::require_binary(seq, Estimator::Compression);
    detail::require_length(seq, kMinLengthCompression, Estimator::Compression, opts, r.warnings);
    if (seq.size() >= kMinLengthCompression && seq.size() < kRecommendedLengthCompression)
        r.warnings.push_back("compression estimate is more reliable with at least " +
                             std::to_string(kRecommendedLengthCompression) + " samples");

    CompressionLayout layout;
    layout.blocks = seq.size() / layout.block_bits;
    if (layout.blocks < layout.dictionary + 2)
        throw Error(ErrorKind::TooShort, "compression estimate needs more blocks than its dictionary");

    const auto s = seq.samples();
    std::vector<std::uint32_t> blocks(layout.blocks);
    for (std::size_t i = 0; i < layout.blocks; ++i) {
        std::uint32_t v = 0;
        for (unsigned j = 0; j < layout.block_bits; ++j)
            v = (v << 1) | s[i * layout.block_bits + j];
        blocks[i] = v;
    }

    // 1-based indices of last occurrence; 0 means unseen.
    std::vector<std::size_t> last(std::size_t{1} << layout.block_bits, 0);
    for (std::size_t i = 1; i <= layout.dictionary; ++i)
        last[blocks[i - 1]] = i;

    const double nu = static_cast<double>(layout.blocks - layout.dictionary);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = layout.dictionary + 1; i <= layout.blocks; ++i) {
        auto& seen = last[blocks[i - 1]];
        const double gap = static_cast<double>(seen != 0 ? i - seen : i);
        seen = i;
        const double lg = std::log2(gap);
        sum += lg;
        sum_sq += lg * lg;
    }
    const double mean = sum / nu;
    constexpr double c = 0.5907;
    const double sigma = c * std::sqrt(std::max(0.0, sum_sq / (nu - 1.0) - mean * mean));

    r.statistic = mean;
    r.bound = mean - kZ99 * sigma / std::sqrt(nu);
    const double p = compression_solve(r.bound, layout);
    r.min_entropy = detail::clamp_entropy(-std::log2(p) / static_cast<double>(layout.block_bits), 2);
    return r;
}

// ---------------------------------------------------------------------------
// t-tuple

inline EstimateResult tuple_estimate(const SampleSequence& seq, std::size_t max_t, const EstimatorOptions& opts = {})
{
    EstimateResult r;
    r.estimator = Estimator::Tuple;
    if (max_t == 0)
        throw Error(ErrorKind::InvalidArgument, "tuple size limit must be at least 1");
    detail::require_length(seq, kMinLengthTuple, Estimator::Tuple, opts, r.warnings);
    if (seq.size() < 2)
        throw Error(ErrorKind::TooShort, "tuple estimate needs at least 2 samples");

    const auto counts = detail::max_tuple_counts(seq.samples(), max_t);
    std::size_t largest = 0;
    for (std::size_t t = 1; t < counts.size() && counts[t] >= kTupleCutoff; ++t)
        largest = t;
    if (largest == 0) {
        largest = 1;
        r.warnings.push_back("no value occurs " + std::to_string(kTupleCutoff) + " times; using single samples");
    }

    const double n = static_cast<double>(seq.size());
    for (std::size_t t = 1; t <= largest; ++t) {
        const double frac = static_cast<double>(counts[t]) / (n - static_cast<double>(t) + 1.0);
        const double p = std::pow(frac, 1.0 / static_cast<double>(t));
        r.statistic = std::max(r.statistic, p);
        r.bound = std::max(r.bound, detail::upper_bound_99(p, seq.size()));
    }
    r.min_entropy = detail::clamp_entropy(-std::log2(r.bound), seq.alphabet_size());
    return r;
}

inline EstimateResult tuple_estimate(const SampleSequence& seq, const EstimatorOptions& opts = {})
{
    return tuple_estimate(seq, opts.max_tuple, opts);
}

// ---------------------------------------------------------------------------
// Suite

inline EstimateResult run_estimator(Estimator e, const SampleSequence& seq, const EstimatorOptions& opts = {})
{
    switch (e) {
    case Estimator::Mcv: return mcv_estimate(seq, opts);
    case Estimator::Collision: return collision_estimate(seq, opts);
    case Estimator::Markov: return markov_estimate(seq, opts);
    case Estimator::Compression: return compression_estimate(seq, opts);
    case Estimator::Tuple: return tuple_estimate(seq, opts);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown estimator");
}

struct EstimatorOutcome {
    Estimator estimator;
    std::variant<EstimateResult, Error> result;

    bool ok() const noexcept { return std::holds_alternative<EstimateResult>(result); }
    const EstimateResult& value() const { return std::get<EstimateResult>(result); }
    const Error& error() const { return std::get<Error>(result); }
};

struct SuiteReport {
    std::vector<EstimatorOutcome> outcomes;
    /// Minimum over the estimators that succeeded.
    std::optional<double> minimum;

    bool all_ok() const noexcept
    {
        return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.ok(); });
    }
};

/// Runs `selected` in order; a failing estimator is recorded in its outcome
/// and does not stop the others.
inline SuiteReport estimate_selected(const SampleSequence& seq, std::span<const Estimator> selected,
                                     const EstimatorOptions& opts = {})
{
    SuiteReport report;
    for (auto e : selected) {
        try {
            auto r = run_estimator(e, seq, opts);
            report.minimum = std::min(report.minimum.value_or(r.min_entropy), r.min_entropy);
            report.outcomes.push_back({e, std::move(r)});
        } catch (const Error& err) {
            report.outcomes.push_back({e, err});
        }
    }
    return report;
}

inline std::vector<Estimator> applicable_estimators(unsigned alphabet_size)
{
    std::vector<Estimator> out;
    for (auto e : all_estimators)
        if (alphabet_size == 2 || !binary_only(e))
            out.push_back(e);
    return out;
}

/// Every estimator applicable to the alphabet: all five for bits, MCV and
/// tuple otherwise.
inline SuiteReport estimate_all(const SampleSequence& seq, const EstimatorOptions& opts = {})
{
    const auto selected = applicable_estimators(seq.alphabet_size());
    return estimate_selected(seq, selected, opts);
}

} // namespace entroscope

#endif // ENTROSCOPE_ESTIMATORS_HPP
