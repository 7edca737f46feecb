#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "pitplot/rng.hpp"

using namespace pitplot;

// Known-answer vectors published with Random123 (kat_vectors, philox4x32_10).
TEST(Philox, KnownAnswerVectors) {
    EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}),
              (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RandomSubstream, PureFunctionOfAddress) {
    const auto s = RandomSubstream::derive(42, "P1");
    EXPECT_EQ(s.uniform(17, 2), s.uniform(17, 2));
    EXPECT_EQ(RandomSubstream::derive(42, "P1").key(), s.key());
    EXPECT_NE(s.uniform(17, 2), s.uniform(17, 3));
    EXPECT_NE(s.uniform(17, 2), s.uniform(18, 2));
    EXPECT_NE(RandomSubstream::derive(42, "P2").key(), s.key());
    EXPECT_NE(RandomSubstream::derive(43, "P1").key(), s.key());
}

TEST(RandomSubstream, UniformMomentsAndRange) {
    const auto s = RandomSubstream::derive(1, "moments");
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int j = 0; j < n; ++j) {
        const double u = s.uniform(static_cast<std::uint64_t>(j), 0);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sum_sq += u * u;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    // Standard error of the mean is sqrt(1/12/n) ~ 6.5e-4.
    EXPECT_NEAR(mean, 0.5, 4 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(var, 1.0 / 12.0, 2e-3);
}

TEST(RandomSubstream, LabelsHashDistinctly) {
    std::set<std::uint64_t> keys;
    for (int i = 0; i < 1000; ++i) keys.insert(RandomSubstream::derive(9, "P" + std::to_string(i)).key());
    EXPECT_EQ(keys.size(), 1000u);
}
