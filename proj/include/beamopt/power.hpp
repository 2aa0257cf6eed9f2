// SPDX-License-Identifier: Apache-2.0
//
// Transmitter RF front-end power model for analog beamforming and the
// resulting beam-sweep energy.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "beamopt/timing.hpp"

namespace beamopt {

/// Component power draws of the gNB transmit chain. Defaults are the
/// published component values (phase shifter, mixer, LO, LPF, baseband amp)
/// with a 27 % PA and an 8-bit, 1 GS/s DAC.
struct PowerModel {
    double p_ps_w = 21.6e-3;
    double p_mixer_w = 0.3e-3;
    double p_lo_w = 22.5e-3;
    double p_lpf_w = 14.0e-3;
    /// Listed with the other components but not part of the transmit-chain
    /// sum; kept for reporting only.
    double p_bb_w = 5.0e-3;
    double pae = 0.27;
    int dac_bits = 8;
    double dac_fs_hz = 1.0e9;

    bool operator==(const PowerModel&) const = default;
};

/// Throws std::invalid_argument naming the offending field.
inline void validate(const PowerModel& m)
{
    auto non_negative = [](double x, const char* name) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument(std::string(name) + " must be a finite non-negative power");
        }
    };
    non_negative(m.p_ps_w, "p_ps_w");
    non_negative(m.p_mixer_w, "p_mixer_w");
    non_negative(m.p_lo_w, "p_lo_w");
    non_negative(m.p_lpf_w, "p_lpf_w");
    non_negative(m.p_bb_w, "p_bb_w");
    non_negative(m.dac_fs_hz, "dac_fs_hz");
    if (!(m.pae > 0.0 && m.pae <= 1.0)) {
        throw std::invalid_argument("pae must lie in (0, 1]");
    }
    if (m.dac_bits < 1 || m.dac_bits > 32) {
        throw std::invalid_argument("dac_bits must lie in [1, 32]");
    }
}

struct EnergyReport {
    double p_gnb_w = 0.0;  ///< power drawn while sending one SSB
    double e_c_j = 0.0;    ///< energy of one full sweep over all directions
    double p_c_w = 0.0;    ///< time-averaged SSB transmission power
};

/// Power of one DAC: static term plus a term linear in resolution and rate.
inline double dac_power(const PowerModel& m)
{
    return 1.5e-5 * std::ldexp(1.0, m.dac_bits) + 9.0e-12 * m.dac_bits * m.dac_fs_hz;
}

/// RF chain: two mixers and two low-pass filters (I and Q).
inline double rf_chain_power(const PowerModel& m) { return 2.0 * m.p_mixer_w + 2.0 * m.p_lpf_w; }

/// Total transmitter power for an n_gnb-element analog array radiating
/// p_t_w. n_gnb is real-valued so averaged operating points can be costed.
inline double gnb_power(double n_gnb, double p_t_w, const PowerModel& m)
{
    return n_gnb * m.p_ps_w + p_t_w / m.pae + rf_chain_power(m) + m.p_lo_w + 2.0 * dac_power(m);
}

/// Sweep energy E_C = S_D * P_gNB * T_SSB and average beam-management power
/// P_C = P_gNB * T_SSB * N_SS / T_SS.
inline EnergyReport sweep_energy(int n_gnb, double p_t_w, const BurstTiming& timing, const PowerModel& m)
{
    if (!(p_t_w > 0.0)) {
        throw std::invalid_argument("sweep_energy: transmit power must be positive");
    }
    EnergyReport r;
    r.p_gnb_w = gnb_power(n_gnb, p_t_w, m);
    r.e_c_j = timing.sector_count * r.p_gnb_w * timing.t_ssb_s;
    r.p_c_w = r.p_gnb_w * timing.t_ssb_s * timing.n_ss / timing.t_ss_s;
    return r;
}

}  // namespace beamopt
