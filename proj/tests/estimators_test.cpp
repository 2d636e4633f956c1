#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "entroscope/estimators.hpp"
#include "test_support.hpp"

using namespace entroscope;
using namespace entroscope::testing;

namespace {

// Hagerty-Draper mean collision time in its general form, with the upper
// incomplete gamma function from Boost.
double hagerty_draper(double p)
{
    const double q = 1.0 - p;
    const double z = 1.0 / q;
    const double f = boost::math::tgamma(3.0, z) * std::pow(z, -3.0) * std::exp(z);
    const double diff = 1.0 / p - 1.0 / q;
    return p / (q * q) * (1.0 + 0.5 * diff) * f - p / q * 0.5 * diff;
}

// Direct double sum over t and u, O(n^2).
double compression_term_brute(double z, std::size_t n, std::size_t d)
{
    double sum = 0.0;
    for (std::size_t t = d + 1; t <= n; ++t) {
        for (std::size_t u = 1; u < t; ++u)
            sum += std::log2(static_cast<double>(u)) * z * z * std::pow(1.0 - z, static_cast<double>(u - 1));
        sum += std::log2(static_cast<double>(t)) * z * std::pow(1.0 - z, static_cast<double>(t - 1));
    }
    return sum / static_cast<double>(n - d);
}

// log2 probability of the most likely 128-sample path, by enumerating
// transition counts instead of paths. Starting in state s, switches
// alternate, so n01 - n10 is 0 or 1 (from 0) or -1 or 0 (from 1). The
// remaining transitions are self-loops, which may sit in any visited state,
// so they all go to the better visited one.
double markov_count_oracle(double p0, double p00, double p01, double p10, double p11)
{
    const int steps = 127;
    const double lg[2][2] = {{std::log2(p00), std::log2(p01)}, {std::log2(p10), std::log2(p11)}};
    const double start[2] = {std::log2(p0), std::log2(1.0 - p0)};
    double best = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < 2; ++s) {
        for (int n01 = 0; n01 <= steps; ++n01) {
            for (int n10 = std::max(0, n01 - 1); n10 <= n01 + 1; ++n10) {
                const int diff = n01 - n10;
                if ((s == 0 && diff != 0 && diff != 1) || (s == 1 && diff != 0 && diff != -1))
                    continue;
                const int loops = steps - n01 - n10;
                if (loops < 0)
                    continue;
                const bool visits0 = s == 0 || n10 > 0;
                const bool visits1 = s == 1 || n01 > 0;
                double loop = -std::numeric_limits<double>::infinity();
                if (visits0)
                    loop = std::max(loop, lg[0][0]);
                if (visits1)
                    loop = std::max(loop, lg[1][1]);
                double total = start[s];
                if (n01 > 0)
                    total += n01 * lg[0][1];
                if (n10 > 0)
                    total += n10 * lg[1][0];
                if (loops > 0)
                    total += loops * loop;
                best = std::max(best, total);
            }
        }
    }
    return best;
}

} // namespace

TEST(SampleSequence, Validation)
{
    EXPECT_THROW(SampleSequence({0, 1, 2}, 2), Error);
    EXPECT_THROW(SampleSequence({0}, 1), Error);
    EXPECT_THROW(SampleSequence({0}, 257), Error);
    EXPECT_NO_THROW(SampleSequence({0, 255}, 256));
}

TEST(Mcv, ConstantInput)
{
    const auto r = mcv_estimate(constant_bits(100));
    EXPECT_EQ(r.statistic, 1.0);
    EXPECT_EQ(r.bound, 1.0);
    EXPECT_EQ(r.min_entropy, 0.0);
}

TEST(Mcv, AlternatingBits)
{
    const auto r = mcv_estimate(alternating_bits(1000));
    EXPECT_DOUBLE_EQ(r.statistic, 0.5);
    EXPECT_NEAR(r.bound, 0.5407505166176406, 1e-12);
    EXPECT_NEAR(r.min_entropy, 0.8869649563897022, 1e-12);
}

TEST(Mcv, FairCoin)
{
    const auto r = mcv_estimate(iid_bits(100000, 0.5, 1));
    EXPECT_GE(r.min_entropy, 0.95);
    EXPECT_LE(r.min_entropy, 1.0);
}

TEST(Mcv, TooShort)
{
    try {
        mcv_estimate(constant_bits(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooShort);
    }
}

TEST(Mcv, ConvergesToTrueMinEntropy)
{
    for (double q : {0.5, 0.6, 0.75, 0.9}) {
        const double truth = -std::log2(std::max(q, 1.0 - q));
        EXPECT_NEAR(mcv_estimate(iid_bits(100000, q, 1234)).min_entropy, truth, 0.03) << q;
    }
}

TEST(Mcv, MonotoneInBias)
{
    double prev = 2.0;
    for (double q : {0.5, 0.6, 0.75, 0.9}) {
        const double h = mcv_estimate(iid_bits(100000, q, 4321)).min_entropy;
        EXPECT_LE(h, prev) << q;
        prev = h;
    }
}

TEST(Collision, ExpectedTimeMatchesHagertyDraper)
{
    for (double p = 0.51; p < 0.999; p += 0.01)
        EXPECT_NEAR(collision_expected_time(p), hagerty_draper(p), 1e-9) << p;
    EXPECT_DOUBLE_EQ(collision_expected_time(0.5), 2.5);
    EXPECT_DOUBLE_EQ(collision_expected_time(1.0), 2.0);
}

TEST(Collision, ConstantInput)
{
    const auto r = collision_estimate(constant_bits(1000));
    EXPECT_DOUBLE_EQ(r.statistic, 2.0);
    EXPECT_LT(r.min_entropy, 0.01);
}

// Near full entropy the 99% bound sits on the flat part of 2 + 2pq, so the
// estimate spreads widely around its mean of about 0.85; a few percent of
// seeds land under 0.80.
TEST(Collision, FairCoin)
{
    int in_range = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = collision_estimate(iid_bits(100000, 0.5, seed));
        EXPECT_LE(r.min_entropy, 1.0);
        in_range += r.min_entropy >= 0.80;
    }
    EXPECT_GE(in_range, 95);
}

TEST(Collision, BiasedCoin)
{
    const auto r = collision_estimate(iid_bits(100000, 0.75, 3));
    EXPECT_NEAR(r.min_entropy, 0.415, 0.08);
}

TEST(Collision, InversionSoundness)
{
    Xoshiro256 rng(8);
    for (int i = 0; i < 100; ++i) {
        const double target = 2.0 + 0.5 * rng.uniform01();
        const double p = collision_solve(target);
        EXPECT_NEAR(collision_expected_time(p), target, 1e-6);
    }
}

TEST(Collision, Errors)
{
    try {
        collision_estimate(uniform_bytes(2000, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonBinaryInput);
    }
    try {
        collision_estimate(constant_bits(999));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooShort);
    }
    EstimatorOptions lenient;
    lenient.allow_short = true;
    const auto r = collision_estimate(constant_bits(999), lenient);
    EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Markov, AlternatingBits)
{
    const auto r = markov_estimate(alternating_bits(1000));
    EXPECT_NEAR(r.statistic, 1.0, 1e-12);
    EXPECT_NEAR(r.min_entropy, 1.0 / 128.0, 1e-12);
}

TEST(Markov, ConstantInput)
{
    EXPECT_EQ(markov_estimate(constant_bits(1000)).min_entropy, 0.0);
    EXPECT_EQ(markov_estimate(constant_bits(1000, 1)).min_entropy, 0.0);
}

TEST(Markov, FairAndBiasedCoin)
{
    const auto fair = markov_estimate(iid_bits(100000, 0.5, 4));
    EXPECT_GE(fair.min_entropy, 0.95);
    EXPECT_LE(fair.min_entropy, 1.0);
    EXPECT_NEAR(markov_estimate(iid_bits(100000, 0.75, 5)).min_entropy, 0.415, 0.05);
}

TEST(Markov, MatchesTransitionCountOracle)
{
    Xoshiro256 rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        // A two-state chain with random stickiness.
        const double stay0 = 0.05 + 0.9 * rng.uniform01();
        const double stay1 = 0.05 + 0.9 * rng.uniform01();
        std::vector<std::uint8_t> bits(5000);
        std::uint8_t state = 0;
        for (auto& b : bits) {
            const double u = rng.uniform01();
            state = state == 0 ? (u < stay0 ? 0 : 1) : (u < stay1 ? 1 : 0);
            b = state;
        }
        double c[2] = {0, 0}, t[2][2] = {{0, 0}, {0, 0}};
        for (std::size_t i = 0; i < bits.size(); ++i) {
            c[bits[i]] += 1;
            if (i + 1 < bits.size())
                t[bits[i]][bits[i + 1]] += 1;
        }
        const double p0 = c[0] / static_cast<double>(bits.size());
        const double p00 = t[0][0] / (t[0][0] + t[0][1]), p01 = 1 - p00;
        const double p10 = t[1][0] / (t[1][0] + t[1][1]), p11 = 1 - p10;
        const double expected = markov_count_oracle(p0, p00, p01, p10, p11);

        const auto r = markov_estimate(SampleSequence(bits, 2));
        EXPECT_NEAR(-r.statistic, expected, 1e-9);
    }
}

TEST(Compression, SymbolTermMatchesDirectSum)
{
    CompressionLayout layout{1300, 1000, 6};
    for (double z : {1.0 / 64.0, 0.03, 0.1, 0.5, 0.9, 1.0})
        EXPECT_NEAR(compression_symbol_term(z, layout), compression_term_brute(z, 1300, 1000), 1e-9) << z;
}

TEST(Compression, ExpectedIsDecreasingFromUniformToConstant)
{
    CompressionLayout layout{20000, 1000, 6};
    double prev = compression_expected(1.0 / 64.0, layout);
    // Maurer's expectation for 6-bit blocks is about 5.2177.
    EXPECT_NEAR(prev, 5.2177, 0.01);
    for (double p = 0.05; p <= 1.0; p += 0.05) {
        const double v = compression_expected(p, layout);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_NEAR(compression_expected(1.0, layout), 0.0, 1e-12);
}

TEST(Compression, ConstantInput)
{
    const auto r = compression_estimate(constant_bits(1'000'000));
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_LT(r.min_entropy, 0.01);
}

TEST(Compression, FairCoin)
{
    const auto r = compression_estimate(iid_bits(1'000'000, 0.5, 7));
    EXPECT_GE(r.min_entropy, 0.80);
    EXPECT_LE(r.min_entropy, 1.0);
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Compression, PeriodicPattern)
{
    // One set bit per 64: almost every 6-bit block is zero and recurs at gap 1.
    const auto r = compression_estimate(periodic_bits(0x0000000000000001ULL, 1'000'000));
    EXPECT_LT(r.min_entropy, 0.1);
}

TEST(Compression, Errors)
{
    try {
        compression_estimate(constant_bits(99'999));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooShort);
    }
    EXPECT_EQ(compression_estimate(constant_bits(100'000)).warnings.size(), 1u);
    EstimatorOptions lenient;
    lenient.allow_short = true;
    EXPECT_THROW(compression_estimate(constant_bits(5000), lenient), Error);
}

TEST(Compression, InversionSoundness)
{
    Xoshiro256 rng(9);
    for (int i = 0; i < 20; ++i) {
        CompressionLayout layout{2000 + uniform_below(rng, 8000), 1000, 6};
        const double p = 1.0 / 64.0 + (1.0 - 1.0 / 64.0) * rng.uniform01();
        const double target = compression_expected(p, layout);
        const double solved = compression_solve(target, layout);
        EXPECT_NEAR(compression_expected(solved, layout), target, 1e-6);
        EXPECT_NEAR(solved, p, 1e-6);
    }
}

TEST(Tuple, ConstantInput)
{
    const auto r = tuple_estimate(constant_bits(1000), 1000);
    EXPECT_EQ(r.min_entropy, 0.0);
}

TEST(Tuple, FairBits)
{
    const auto r = tuple_estimate(iid_bits(100000, 0.5, 10), 1 << 20);
    EXPECT_GE(r.min_entropy, 0.85);
    EXPECT_LE(r.min_entropy, 1.0);
}

TEST(Tuple, UniformBytes)
{
    const auto r = tuple_estimate(uniform_bytes(100000, 11), 1 << 20);
    EXPECT_GE(r.min_entropy, 6.0);
    EXPECT_LE(r.min_entropy, 8.0);
}

TEST(Tuple, FallsBackToSingleSamples)
{
    const auto r = tuple_estimate(uniform_bytes(1000, 12), 100);
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_GT(r.min_entropy, 0.0);
}

TEST(Tuple, MaxTupleLimitsSearch)
{
    // Period-3 pattern: single symbols look balanced, triples do not.
    std::vector<std::uint8_t> bits;
    for (int i = 0; i < 3000; ++i)
        bits.push_back(i % 3 == 0 ? 1 : 0);
    const SampleSequence seq(bits, 2);
    EXPECT_GT(tuple_estimate(seq, 1).min_entropy, tuple_estimate(seq, 50).min_entropy);
    EXPECT_THROW(tuple_estimate(seq, 0), Error);
}

TEST(Suite, BinaryRunsAllFive)
{
    // Compression needs its recommended length to clear 0.80 on fair bits.
    const auto report = estimate_all(iid_bits(1'000'000, 0.5, 13));
    ASSERT_EQ(report.outcomes.size(), 5u);
    EXPECT_TRUE(report.all_ok());
    ASSERT_TRUE(report.minimum);
    EXPECT_GE(*report.minimum, 0.80);
    EXPECT_LE(*report.minimum, 1.0);
}

TEST(Suite, ConstantCollapses)
{
    const auto report = estimate_all(constant_bits(100000));
    EXPECT_TRUE(report.all_ok());
    EXPECT_LT(*report.minimum, 0.01);
}

TEST(Suite, BytesRunMcvAndTuple)
{
    const auto report = estimate_all(uniform_bytes(100000, 14));
    ASSERT_EQ(report.outcomes.size(), 2u);
    EXPECT_EQ(report.outcomes[0].estimator, Estimator::Mcv);
    EXPECT_EQ(report.outcomes[1].estimator, Estimator::Tuple);
    EXPECT_GE(*report.minimum, 6.0);
    EXPECT_LE(*report.minimum, 8.0);
}

TEST(Suite, FailuresAreReportedInBand)
{
    const std::vector<Estimator> selected{Estimator::Collision, Estimator::Mcv};
    const auto report = estimate_selected(uniform_bytes(5000, 15), selected);
    ASSERT_EQ(report.outcomes.size(), 2u);
    EXPECT_FALSE(report.outcomes[0].ok());
    EXPECT_EQ(report.outcomes[0].error().kind(), ErrorKind::NonBinaryInput);
    EXPECT_TRUE(report.outcomes[1].ok());
    EXPECT_TRUE(report.minimum.has_value());
}

TEST(Suite, RangeAndDeterminism)
{
    for (std::uint64_t seed = 20; seed < 24; ++seed) {
        const auto seq = iid_bits(100000, 0.3 + 0.1 * static_cast<double>(seed - 20), seed);
        const auto a = estimate_all(seq);
        const auto b = estimate_all(seq);
        for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
            const double h = a.outcomes[i].value().min_entropy;
            EXPECT_GE(h, 0.0);
            EXPECT_LE(h, 1.0);
            EXPECT_EQ(h, b.outcomes[i].value().min_entropy);
            EXPECT_EQ(a.outcomes[i].value().statistic, b.outcomes[i].value().statistic);
        }
    }
}
