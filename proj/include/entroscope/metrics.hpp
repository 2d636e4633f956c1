#ifndef ENTROSCOPE_METRICS_HPP
#define ENTROSCOPE_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entroscope/charspace.hpp"
#include "entroscope/error.hpp"

namespace entroscope {

inline constexpr double kDistributionTolerance = 1e-9;

/// Finite discrete probability vector. Construction validates that every
/// entry is finite and nonnegative and that the entries sum to 1 within
/// `kDistributionTolerance`.
class Distribution {
public:
    explicit Distribution(std::vector<double> probs) : probs_(std::move(probs))
    {
        if (probs_.empty())
            throw Error(ErrorKind::InvalidDistribution, "distribution has no entries");
        double sum = 0.0;
        for (double p : probs_) {
            if (!std::isfinite(p) || p < 0.0 || p > 1.0)
                throw Error(ErrorKind::InvalidDistribution, "probability outside [0, 1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kDistributionTolerance)
            throw Error(ErrorKind::InvalidDistribution, "probabilities sum to " + std::to_string(sum));
    }

    static Distribution from_counts(std::span<const std::uint64_t> counts)
    {
        const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
        if (total == 0)
            throw Error(ErrorKind::InvalidDistribution, "all counts are zero");
        std::vector<double> probs;
        probs.reserve(counts.size());
        for (auto c : counts)
            probs.push_back(static_cast<double>(c) / static_cast<double>(total));
        return Distribution(std::move(probs));
    }

    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t support_size() const noexcept { return probs_.size(); }

private:
    std::vector<double> probs_;
};

/// H0 = log2(n).
inline double hartley(std::uint64_t n)
{
    if (n == 0)
        throw Error(ErrorKind::InvalidSize, "Hartley entropy needs at least one outcome");
    return std::log2(static_cast<double>(n));
}

/// H1 = -sum p log2 p, with 0 log 0 = 0.
inline double shannon(const Distribution& dist) noexcept
{
    double h = 0.0;
    for (double p : dist.probs())
        if (p > 0.0)
            h -= p * std::log2(p);
    return h;
}

inline double min_entropy(const Distribution& dist) noexcept
{
    const auto probs = dist.probs();
    return -std::log2(*std::max_element(probs.begin(), probs.end()));
}

/// Expected number of guesses for an attacker trying outcomes in order of
/// decreasing probability.
inline double guessing_entropy(const Distribution& dist)
{
    std::vector<double> sorted(dist.probs().begin(), dist.probs().end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double g = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        g += sorted[i] * static_cast<double>(i + 1);
    return g;
}

/// Numerator of the class-weighted expectation over the denominator |K|:
/// |L| l + |U| u + |D| d + |S| s. Exact.
inline std::uint64_t expectation_numerator(const ClassProfile& p,
                                           const CharSpace& space = CharSpace::english()) noexcept
{
    std::uint64_t num = 0;
    for (auto c : all_classes)
        num += static_cast<std::uint64_t>(space.class_size(c)) * p.count(c);
    return num;
}

/// E(c(P)) = p_L l + p_U u + p_D d + p_S s.
inline double expectation(const ClassProfile& p, const CharSpace& space = CharSpace::english()) noexcept
{
    return static_cast<double>(expectation_numerator(p, space)) / static_cast<double>(space.size());
}

/// H_E = log2 E(c(P)) / log2 |K|. Negative below E = 1, above 1 past E = |K|.
inline double expectation_entropy(const ClassProfile& p, const CharSpace& space = CharSpace::english())
{
    const auto num = expectation_numerator(p, space);
    if (num == 0)
        throw Error(ErrorKind::DegenerateProfile, "expectation entropy of an empty profile is undefined");
    const double den = static_cast<double>(space.size());
    return std::log2(static_cast<double>(num) / den) / std::log2(den);
}

struct PasswordScore {
    ClassProfile profile;
    double expectation = 0.0;
    double expectation_entropy = 0.0;
    bool valid = false;

    friend bool operator==(const PasswordScore&, const PasswordScore&) = default;
};

inline PasswordScore score_profile(const ClassProfile& p, const CharSpace& space = CharSpace::english())
{
    return {p, expectation(p, space), expectation_entropy(p, space), is_valid(p, space)};
}

inline PasswordScore score_password(std::string_view password, const CharSpace& space = CharSpace::english())
{
    return score_profile(profile(password, space), space);
}

} // namespace entroscope

#endif // ENTROSCOPE_METRICS_HPP
