#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "entroscope/corpus.hpp"
#include "entroscope/generator.hpp"
#include "entroscope/metrics.hpp"

using namespace entroscope;

namespace {

double mean_expectation_entropy(const std::vector<std::string>& passwords)
{
    double sum = 0.0;
    for (const auto& pw : passwords)
        sum += score_password(pw).expectation_entropy;
    return sum / static_cast<double>(passwords.size());
}

} // namespace

TEST(Xoshiro, ReferenceOutput)
{
    // First outputs of xoshiro256** seeded through SplitMix64(0), as given by
    // the reference C implementations.
    SplitMix64 sm(0);
    EXPECT_EQ(sm(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(sm(), 0x6E789E6AA1B965F4ULL);
    Xoshiro256 a(42), b(42);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(a(), b());
}

TEST(Labels, Lengths)
{
    EXPECT_EQ(label_length(DatasetLabel::RandomMin), 10u);
    EXPECT_EQ(label_length(DatasetLabel::Random10ch), 10u);
    EXPECT_EQ(label_length(DatasetLabel::Random32ch), 32u);
    EXPECT_EQ(label_length(DatasetLabel::Random128ch), 128u);
    EXPECT_EQ(label_length(DatasetLabel::RandomMax), 376u);
    for (auto l : named_labels)
        EXPECT_EQ(parse_label(to_string(l)), l);
    EXPECT_FALSE(parse_label("Random64ch").has_value());
}

TEST(Generate, LengthAndCharset)
{
    const auto pws = generate(GenSpec::named(DatasetLabel::Random32ch, 5));
    ASSERT_EQ(pws.size(), 5u);
    for (const auto& pw : pws) {
        EXPECT_EQ(pw.size(), 32u);
        EXPECT_NO_THROW(profile(pw));
    }
    const auto seeded = generate(GenSpec::named(DatasetLabel::RandomMax, 3000, 99));
    for (const auto& pw : seeded) {
        ASSERT_EQ(pw.size(), 376u);
        EXPECT_TRUE(std::all_of(pw.begin(), pw.end(), [](char c) { return CharSpace::english().contains(c); }));
    }
}

TEST(Generate, InfeasibleValidity)
{
    auto spec = GenSpec::custom(4, 1, 1);
    spec.require_valid = true;
    try {
        generate(spec);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasibleValidity);
    }
}

TEST(Generate, RequireValidOnlyEmitsValid)
{
    auto spec = GenSpec::named(DatasetLabel::RandomMin, 5000, 3);
    spec.require_valid = true;
    for (const auto& pw : generate(spec))
        EXPECT_TRUE(is_valid(profile(pw)));
}

TEST(Generate, RejectsBadSpecs)
{
    EXPECT_THROW(generate(GenSpec::custom(0, 1, 1)), Error);
    EXPECT_THROW(generate(GenSpec::custom(5, 0, 1)), Error);
    GenSpec mismatched = GenSpec::named(DatasetLabel::Random32ch, 1, 1);
    mismatched.length = 33;
    EXPECT_THROW(generate(mismatched), Error);
}

TEST(Generate, SeededIsDeterministicAcrossThreadCounts)
{
    const auto spec = GenSpec::named(DatasetLabel::Random32ch, 5000, 1);
    const auto one = generate(spec, CharSpace::english(), 1);
    EXPECT_EQ(generate(spec, CharSpace::english(), 4), one);
    EXPECT_EQ(generate(spec, CharSpace::english(), 7), one);
    EXPECT_NE(generate(GenSpec::named(DatasetLabel::Random32ch, 5000, 2)), one);
}

TEST(Generate, SeededReferenceOutput)
{
    // Frozen output; changing the generator or the block derivation breaks
    // reproducibility of every seeded corpus.
    const auto pws = generate(GenSpec::custom(16, 2, 1));
    EXPECT_EQ(pws[0], R"(tir('|[Tq"bM-ZLS)");
    EXPECT_EQ(pws[1], "!3l4x;Bi[@g)bTFs");
}

TEST(Generate, Random128chMeanExpectationEntropy)
{
    const double m = mean_expectation_entropy(generate(GenSpec::named(DatasetLabel::Random128ch, 10000, 42)));
    EXPECT_GE(m, 0.775);
    EXPECT_LE(m, 0.80);
}

TEST(Generate, UniformityChiSquare)
{
    const auto& k = CharSpace::english();
    const auto pws = generate(GenSpec::custom(94, 1000, 2024));
    std::vector<double> counts(k.size(), 0.0);
    for (const auto& pw : pws)
        for (char c : pw)
            counts[*k.index_of(c)] += 1.0;
    const double expected = 94.0 * 1000.0 / 94.0;
    double chi2 = 0.0;
    for (double c : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, 139.9);
}

TEST(Generate, OsEntropyIndexIsInRange)
{
    OsEntropySource source;
    std::vector<int> seen(94, 0);
    for (int i = 0; i < 20000; ++i)
        ++seen[source.uniform_index(94)];
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int n) { return n > 0; }));
    EXPECT_THROW(source.uniform_index(0), Error);
    EXPECT_THROW(source.uniform_index(257), Error);
}

TEST(LeakedLike, Contract)
{
    const auto pws = generate_leaked_like(3, 1);
    ASSERT_EQ(pws.size(), 3u);
    for (const auto& pw : pws) {
        EXPECT_GE(pw.size(), 4u);
        EXPECT_LE(pw.size(), 9u);
        EXPECT_EQ(profile(pw).symbol, 0u);
    }
}

TEST(LeakedLike, LowExpectationEntropyAndDeterministic)
{
    const auto a = generate_leaked_like(10000, 7);
    EXPECT_LT(mean_expectation_entropy(a), 0.25);
    EXPECT_EQ(generate_leaked_like(10000, 7), a);

    std::size_t lower = 0, total = 0;
    for (const auto& pw : a) {
        lower += profile(pw).lower;
        total += pw.size();
    }
    EXPECT_NEAR(static_cast<double>(lower) / static_cast<double>(total), 0.80, 0.01);
}
