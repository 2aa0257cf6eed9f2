// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "beamopt/antenna.hpp"
#include "beamopt/timing.hpp"

using namespace beamopt;

TEST(Timing, SymbolDurations)
{
    EXPECT_NEAR(symbol_duration(4), 4.4656e-6, 1e-10);
    EXPECT_NEAR(symbol_duration(0), 71.45e-6, 1e-15);
    const BurstTiming t = burst_timing(8, 8, 20e-3, 4);
    EXPECT_NEAR(t.t_ssb_s, 17.8625e-6, 1e-10);
    EXPECT_NEAR(t.t_slot_s, 14.0 * t.t_symb_s, 1e-18);
    EXPECT_THROW(symbol_duration(7), std::invalid_argument);
}

TEST(Timing, BurstSizesAndPeriods)
{
    for (int n : {8, 16, 32, 64}) {
        EXPECT_TRUE(is_valid_burst_size(n));
    }
    EXPECT_FALSE(is_valid_burst_size(4));
    EXPECT_DOUBLE_EQ(canonical_burst_period(0.04), 40e-3);
    EXPECT_DOUBLE_EQ(canonical_burst_period(160e-3 * (1 + 1e-13)), 160e-3);
    EXPECT_THROW(canonical_burst_period(0.03), std::invalid_argument);
    EXPECT_THROW(burst_timing(8, 12, 20e-3, 4), std::invalid_argument);
}

TEST(Timing, EightElementSweep)
{
    const BurstTiming t = burst_timing(8, 8, 20e-3, 4);
    EXPECT_EQ(t.sector_count, 26);
    EXPECT_EQ(t.bursts, 4);
    EXPECT_EQ(t.n_ss_last, 2);
    EXPECT_NEAR(t.t_last_s, 12.0 * t.t_symb_s, 1e-15);
    EXPECT_NEAR(t.t_last_s, 53.59e-6, 0.01e-6);
    EXPECT_NEAR(t.t_bm_s, 60e-3 + 53.59e-6, 0.01e-6);
}

TEST(Timing, LastBurstParity)
{
    const double ts = symbol_duration(4);
    EXPECT_NEAR(last_burst_duration(1, ts), 6.0 * ts, 1e-18);
    EXPECT_NEAR(last_burst_duration(3, ts), 20.0 * ts, 1e-18);
    EXPECT_NEAR(last_burst_duration(8, ts), 54.0 * ts, 1e-18);
    for (int k = 1; k < 64; ++k) {
        EXPECT_GT(last_burst_duration(k + 1, ts), last_burst_duration(k, ts));
    }
}

TEST(Timing, SingleBurstIgnoresPeriod)
{
    const BurstTiming a = burst_timing(2, 8, 5e-3, 4);
    const BurstTiming b = burst_timing(2, 8, 160e-3, 4);
    EXPECT_EQ(a.bursts, 1);
    EXPECT_DOUBLE_EQ(a.t_bm_s, a.t_last_s);
    EXPECT_DOUBLE_EQ(a.t_bm_s, b.t_bm_s);
}

TEST(Timing, SweepTimeNonDecreasingAcrossBurstBoundaries)
{
    for (int n_ss : {8, 16, 32, 64}) {
        for (double t_ss : kBurstPeriodsS) {
            int prev_bursts = 0;
            double prev_full = 0.0;
            for (int n = 1; n <= 64; ++n) {
                const BurstTiming t = burst_timing(n, n_ss, t_ss, 4);
                EXPECT_GE(t.bursts, prev_bursts);
                EXPECT_GE(t.t_ss_s * (t.bursts - 1), prev_full);
                prev_bursts = t.bursts;
                prev_full = t.t_ss_s * (t.bursts - 1);
            }
        }
    }
}

TEST(Timing, MobilityOffset)
{
    BurstTiming t;
    t.t_bm_s = 0.02;
    EXPECT_DOUBLE_EQ(mobility_offset(50.0, 0.0, t), 0.0);
    EXPECT_NEAR(mobility_offset(50.0, 5.0, t), 0.002, 1e-15);
    EXPECT_DOUBLE_EQ(mobility_offset(37.0, 6.0, t), 2.0 * mobility_offset(37.0, 3.0, t));
    EXPECT_THROW(mobility_offset(0.0, 1.0, t), DomainError);
}

TEST(Timing, TotalOffset)
{
    EXPECT_NEAR(total_offset(0.05, 0.002), 0.052, 1e-15);
    EXPECT_NEAR(total_offset(-0.05, 0.05), 0.0, 1e-15);
    EXPECT_NEAR(total_offset(-0.10, 0.02), 0.08, 1e-15);
}

TEST(Timing, ProductQuasiInvariance)
{
    // Scaling v down and T_SS up by c moves theta_v by at most v T_l (c-1) / (c d).
    const double d = 20.0;
    for (int n = 1; n <= 64; ++n) {
        for (int n_ss : {8, 16, 32, 64}) {
            for (std::size_t i = 0; i + 1 < kBurstPeriodsS.size(); ++i) {
                const BurstTiming a = burst_timing(n, n_ss, kBurstPeriodsS[i], 4);
                if (a.bursts == 1) {
                    continue;
                }
                const BurstTiming b = burst_timing(n, n_ss, kBurstPeriodsS[i + 1], 4);
                const double v = 4.0;
                const double c = 2.0;
                const double ta = mobility_offset(d, v, a);
                const double tb = mobility_offset(d, v / c, b);
                EXPECT_LE(std::abs(ta - tb), v * a.t_last_s * (c - 1.0) / (c * d) + 1e-15);
                if (n_ss == 8 && a.t_ss_s >= 20e-3) {
                    EXPECT_LT(std::abs(ta - tb) / ta, 0.01);
                }
            }
        }
    }
}
