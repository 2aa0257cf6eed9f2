// SPDX-License-Identifier: Apache-2.0
//
// SSB burst arithmetic and mobility-induced angular offsets.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "beamopt/antenna.hpp"
#include "beamopt/units.hpp"

namespace beamopt {

inline constexpr std::array<int, 4> kSsbBurstSizes{8, 16, 32, 64};
inline constexpr std::array<double, 6> kBurstPeriodsS{5e-3, 10e-3, 20e-3, 40e-3, 80e-3, 160e-3};

inline bool is_valid_burst_size(int n_ss)
{
    return std::find(kSsbBurstSizes.begin(), kSsbBurstSizes.end(), n_ss) != kSsbBurstSizes.end();
}

/// Maps t_ss_s to the exact member of the burst-period set, or throws.
inline double canonical_burst_period(double t_ss_s)
{
    for (double t : kBurstPeriodsS) {
        if (std::abs(t_ss_s - t) <= 1e-9 * t) {
            return t;
        }
    }
    throw std::invalid_argument("t_ss_s must be one of 5, 10, 20, 40, 80, 160 ms, got " + std::to_string(t_ss_s));
}

/// OFDM symbol duration 71.45 us / 2^n.
inline double symbol_duration(int numerology)
{
    if (numerology < 0 || numerology > 6) {
        throw std::invalid_argument("numerology must lie in [0, 6]");
    }
    return 71.45e-6 / static_cast<double>(1 << numerology);
}

struct BurstTiming {
    int sector_count = 0;
    int n_ss = 8;
    double t_ss_s = 20e-3;
    double t_symb_s = 0.0;
    double t_slot_s = 0.0;
    double t_ssb_s = 0.0;
    int bursts = 0;     ///< ceil(S_D / N_SS)
    int n_ss_last = 0;  ///< SSBs sent in the final burst
    double t_last_s = 0.0;
    double t_bm_s = 0.0;
};

/// Time to send `count` SSBs packed two per slot: an even count ends two
/// symbols before the last slot boundary, an odd count six symbols into it.
inline double last_burst_duration(int count, double t_symb_s)
{
    const double t_slot = 14.0 * t_symb_s;
    if (count % 2 == 0) {
        return (count / 2) * t_slot - 2.0 * t_symb_s;
    }
    return (count / 2) * t_slot + 6.0 * t_symb_s;
}

/// Burst timing for a sweep over `sectors` directions. Takes the sector
/// count directly so real-valued (averaged) array sizes can reuse it.
inline BurstTiming burst_timing_for_sectors(int sectors, int n_ss, double t_ss_s, int numerology)
{
    if (!is_valid_burst_size(n_ss)) {
        throw std::invalid_argument("n_ss must be one of 8, 16, 32, 64, got " + std::to_string(n_ss));
    }
    if (sectors < 1) {
        throw std::invalid_argument("sector count must be positive");
    }
    BurstTiming t;
    t.sector_count = sectors;
    t.n_ss = n_ss;
    t.t_ss_s = canonical_burst_period(t_ss_s);
    t.t_symb_s = symbol_duration(numerology);
    t.t_slot_s = 14.0 * t.t_symb_s;
    t.t_ssb_s = 4.0 * t.t_symb_s;
    t.bursts = (sectors + n_ss - 1) / n_ss;
    t.n_ss_last = sectors - n_ss * (t.bursts - 1);
    t.t_last_s = last_burst_duration(t.n_ss_last, t.t_symb_s);
    t.t_bm_s = t.t_ss_s * (t.bursts - 1) + t.t_last_s;
    return t;
}

inline BurstTiming burst_timing(int n_gnb, int n_ss, double t_ss_s, int numerology)
{
    return burst_timing_for_sectors(sector_count(n_gnb), n_ss, t_ss_s, numerology);
}

/// Angle swept by a UE moving tangentially at v during one full sweep.
inline double mobility_offset(double dist2d_m, double v_mps, const BurstTiming& timing)
{
    if (!(dist2d_m > 0.0)) {
        throw DomainError("mobility_offset: UE at the cell centre has no defined angular rate");
    }
    return v_mps * timing.t_bm_s / dist2d_m;
}

inline double total_offset(double theta_i_rad, double theta_v_rad) { return std::abs(theta_i_rad + theta_v_rad); }

}  // namespace beamopt
