// SPDX-License-Identifier: Apache-2.0
//
// Uniform linear array: beamwidths, azimuth sweep codebook and array factor.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamopt/units.hpp"

namespace beamopt {

inline constexpr int kMinAntennas = 1;
inline constexpr int kMaxAntennas = 64;

/// Half-power beamwidth approximation 2 / N (radians). N may be an average.
inline double half_power_beamwidth(double n_gnb) { return 2.0 / n_gnb; }

/// Number of directions needed to sweep the full azimuth, ceil(pi * N).
/// Accepts real N so averaged solutions can be plugged into the bounds.
inline int sector_count_real(double n_gnb)
{
    const long double product = std::numbers::pi_v<long double> * static_cast<long double>(n_gnb);
    return static_cast<int>(std::ceil(product));
}

inline int sector_count(int n_gnb)
{
    if (n_gnb < kMinAntennas || n_gnb > kMaxAntennas) {
        throw std::out_of_range("sector_count: n_gnb must lie in [1, 64], got " + std::to_string(n_gnb));
    }
    return sector_count_real(n_gnb);
}

/// First-null beamwidth 2 asin(2 / N). Undefined for N < 2, where the
/// array has no first null.
inline double first_null_beamwidth(double n_gnb)
{
    if (!(n_gnb >= 2.0)) {
        throw DomainError("first_null_beamwidth: requires n_gnb >= 2");
    }
    return 2.0 * std::asin(2.0 / n_gnb);
}

/// Array-factor magnitude |sin(pi N/2 sin t) / sin(pi/2 sin t)|. Where the
/// denominator vanishes (boresight and grating points) the analytic limit
/// N |cos(pi N/2 s) / cos(pi/2 s)| is returned.
inline double array_gain(int n_gnb, double theta_rad)
{
    const double s = std::sin(theta_rad);
    const double den = std::sin(0.5 * kPi * s);
    if (std::abs(den) < 1e-12) {
        return n_gnb * std::abs(std::cos(0.5 * kPi * n_gnb * s) / std::cos(0.5 * kPi * s));
    }
    return std::abs(std::sin(0.5 * kPi * n_gnb * s) / den);
}

struct BeamConfig {
    int n_gnb = 1;
    double delta_3db_rad = 2.0;
    int sector_count = 4;
    std::optional<double> fnbw_rad;
    std::vector<double> boresights_rad;
};

inline BeamConfig make_beam_config(int n_gnb)
{
    BeamConfig b;
    b.n_gnb = n_gnb;
    b.sector_count = sector_count(n_gnb);
    b.delta_3db_rad = half_power_beamwidth(n_gnb);
    if (n_gnb >= 2) {
        b.fnbw_rad = first_null_beamwidth(n_gnb);
    }
    b.boresights_rad.reserve(b.sector_count);
    for (int m = 0; m < b.sector_count; ++m) {
        b.boresights_rad.push_back(m * b.delta_3db_rad);
    }
    return b;
}

struct BeamAssignment {
    int beam = 1;             ///< 1-based codebook index
    double offset_rad = 0.0;  ///< signed phi - boresight, wrapped
};

/// Nearest boresight to phi with wraparound at 2 pi; exact ties go to the
/// lower index. Boresights sit at m * delta for m = 0 .. sectors-1, and
/// sectors * delta >= 2 pi, so the last beam overlaps beam 1 across the seam.
inline BeamAssignment nearest_boresight(double phi_rad, double delta_rad, int sectors)
{
    auto lower = static_cast<int>(std::floor(phi_rad / delta_rad));
    if (lower >= sectors) {
        lower = sectors - 1;
    }
    if (lower < 0) {
        lower = 0;
    }
    const double below = phi_rad - lower * delta_rad;
    const int upper = lower + 1;
    const double upper_angle = upper < sectors ? upper * delta_rad : kTwoPi;
    const double above = upper_angle - phi_rad;
    if (upper == sectors) {
        // The neighbour across the seam is beam 1, which has the lower index.
        if (above <= below) {
            return {1, -above};
        }
        return {lower + 1, below};
    }
    if (below <= above) {
        return {lower + 1, below};
    }
    return {upper + 1, -above};
}

inline BeamAssignment initial_beam_and_offset(double phi_rad, const BeamConfig& beams)
{
    return nearest_boresight(phi_rad, beams.delta_3db_rad, beams.sector_count);
}

/// True for the two beams whose coverage is clipped by the 2 pi seam
/// overlap (beam 1 and beam S_D); their offsets are not uniform.
inline bool is_seam_beam(int beam, int sectors) { return beam == 1 || beam == sectors; }

}  // namespace beamopt
