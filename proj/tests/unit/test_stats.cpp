#include <gtest/gtest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "ssarf/stats.hpp"
#include "stats_oracle.hpp"

namespace {

using ssarf::testing::oracle_stats_wide;

TEST(Stats, MedianOddAndEven)
{
    std::vector<double> odd{3.0, 1.0, 2.0};
    std::vector<double> even{4.0, 1.0, 3.0, 2.0};
    EXPECT_EQ(ssarf::median(odd), 2.0);
    EXPECT_EQ(ssarf::median(even), 2.5);
}

TEST(Stats, SingleValueHasNoSpread)
{
    std::vector<double> one{42.0};
    auto const s = ssarf::summarize(one);
    EXPECT_EQ(s.minimum, 42.0);
    EXPECT_EQ(s.maximum, 42.0);
    EXPECT_EQ(s.mean, 42.0);
    EXPECT_EQ(s.median, 42.0);
    EXPECT_EQ(s.std_dev, 0.0);
    EXPECT_EQ(s.variance, 0.0);
}

TEST(Stats, SampleDenominator)
{
    // {2, 4, 4, 4, 5, 5, 7, 9}: squared deviations sum to 32.
    std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
    auto const s = ssarf::summarize(v);
    EXPECT_DOUBLE_EQ(s.mean, 5.0);
    EXPECT_DOUBLE_EQ(s.variance, 32.0 / 7.0);
    EXPECT_DOUBLE_EQ(s.std_dev * s.std_dev, s.variance);
}

TEST(Stats, EmptyInputThrows)
{
    std::vector<double> none;
    EXPECT_THROW((void)ssarf::summarize(none), std::invalid_argument);
    EXPECT_THROW((void)ssarf::median(none), std::invalid_argument);
    EXPECT_THROW((void)ssarf::mean(none), std::invalid_argument);
}

TEST(StatsProperty, MatchesWideOracleOnRandomColumns)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto const n = std::uniform_int_distribution<int>(1, 300)(rng);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) {
            x = std::uniform_real_distribution<double>(-1e3, 1e3)(rng);
        }
        auto const got = ssarf::summarize(v);
        auto const want = oracle_stats_wide(v);
        auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
        EXPECT_EQ(got.minimum, want.minimum);
        EXPECT_EQ(got.maximum, want.maximum);
        EXPECT_EQ(got.median, want.median);
        EXPECT_TRUE(close(got.mean, want.mean));
        EXPECT_TRUE(close(got.variance, want.variance));
        EXPECT_TRUE(close(got.std_dev, want.std_dev));
        EXPECT_LE(got.minimum, got.median);
        EXPECT_LE(got.median, got.maximum);
        EXPECT_GE(got.variance, 0.0);
    }
}

} // namespace
