// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "beamopt/rng.hpp"

using namespace beamopt;

// Known-answer vectors published with the Random123 library (philox4x32_10).
TEST(Philox, KnownAnswerZero)
{
    const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out[0], 0x6627e8d5u);
    EXPECT_EQ(out[1], 0xe169c58du);
    EXPECT_EQ(out[2], 0xbc57ac4cu);
    EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes)
{
    const auto out = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                          {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out[0], 0x408f276du);
    EXPECT_EQ(out[1], 0x41c83b0eu);
    EXPECT_EQ(out[2], 0xa20bc7c6u);
    EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi)
{
    const auto out = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                          {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out[0], 0xd16cfe09u);
    EXPECT_EQ(out[1], 0x94fdccebu);
    EXPECT_EQ(out[2], 0x5001e420u);
    EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(RandomStream, SameIdSameSequence)
{
    RandomStream a(42, {7, 3, StreamPurpose::Position, 0});
    RandomStream b(42, {7, 3, StreamPurpose::Position, 0});
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next64(), b.next64());
    }
}

TEST(RandomStream, DistinctIdsDiffer)
{
    const StreamId ids[] = {
        {7, 3, StreamPurpose::Position, 0}, {8, 3, StreamPurpose::Position, 0},
        {7, 4, StreamPurpose::Position, 0}, {7, 3, StreamPurpose::Fading, 0},
        {7, 3, StreamPurpose::Fading, 5},   {1ull << 40, 3, StreamPurpose::Position, 0},
    };
    std::set<std::uint64_t> first;
    for (const auto& id : ids) {
        RandomStream s(42, id);
        first.insert(s.next64());
    }
    EXPECT_EQ(first.size(), std::size(ids));
    RandomStream s1(1, ids[0]);
    RandomStream s2(2, ids[0]);
    EXPECT_NE(s1.next64(), s2.next64());
}

TEST(RandomStream, UniformRangesAndMoments)
{
    RandomStream s(9, {0, 0, StreamPurpose::OffsetSample, 0});
    double sum = 0.0;
    double sum_exp = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double v = s.uniform_open0();
        ASSERT_GT(v, 0.0);
        ASSERT_LE(v, 1.0);
        sum += u;
        sum_exp += s.exponential();
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(sum_exp / n, 1.0, 4.0 / std::sqrt(n));
}

TEST(RandomStream, NormalMoments)
{
    RandomStream s(5, {1, 2, StreamPurpose::Shadowing, 0});
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        sum += x;
        sum_sq += x * x;
    }
    EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(sum_sq / n, 1.0, 0.02);
}

TEST(RandomStream, LongStreamsDoNotRepeatAndEventuallyThrow)
{
    RandomStream s(3, {0, 0, StreamPurpose::OffsetSample, 0});
    const std::uint64_t first = s.next64();
    for (std::uint32_t i = 1; i < 2 * RandomStream::kMaxBlocks; ++i) {
        ASSERT_NE(s.next64(), first) << i;
    }
    EXPECT_THROW(s.next64(), std::length_error);
}
