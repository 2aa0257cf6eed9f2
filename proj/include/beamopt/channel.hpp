// SPDX-License-Identifier: Apache-2.0
//
// Rural-macro (RMa) link budget: LoS probability, path loss, noise and the
// per-watt SNR factor gamma with P_t * gamma = received SNR.
#pragma once

#include <algorithm>
#include <cmath>

#include "beamopt/scenario.hpp"
#include "beamopt/units.hpp"

namespace beamopt {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kUeGain = 1.0;

enum class LinkState { LoS, NLoS };

/// RMa LoS probability as a function of ground distance.
inline double los_probability(double dist2d_m)
{
    if (dist2d_m <= 10.0) {
        return 1.0;
    }
    return std::exp(-(dist2d_m - 10.0) / 1000.0);
}

/// RMa LoS breakpoint distance 2 pi h_BS h_UT f_c / c.
inline double breakpoint_distance(const ScenarioConfig& c)
{
    return kTwoPi * c.gnb_height_m * c.ue_height_m * c.carrier_hz / kSpeedOfLight;
}

namespace detail {

inline double rma_pl1(double d3d, double fc_ghz, double h)
{
    const double hp = std::pow(h, 1.72);
    return 20.0 * std::log10(40.0 * kPi * d3d * fc_ghz / 3.0) + std::min(0.03 * hp, 10.0) * std::log10(d3d) -
           std::min(0.044 * hp, 14.77) + 0.002 * std::log10(h) * d3d;
}

inline double rma_los(const ScenarioConfig& c, double d3d)
{
    const double fc_ghz = c.carrier_hz / 1e9;
    const double h = c.building_height_m;
    const double d_bp = breakpoint_distance(c);
    if (d3d <= d_bp) {
        return rma_pl1(d3d, fc_ghz, h);
    }
    return rma_pl1(d_bp, fc_ghz, h) + 40.0 * std::log10(d3d / d_bp);
}

inline double rma_nlos_prime(const ScenarioConfig& c, double d3d)
{
    const double fc_ghz = c.carrier_hz / 1e9;
    const double h = c.building_height_m;
    const double w = c.street_width_m;
    const double h_bs = c.gnb_height_m;
    const double h_ut = c.ue_height_m;
    const double ratio = h / h_bs;
    const double lh = std::log10(11.75 * h_ut);
    return 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) - (24.37 - 3.7 * ratio * ratio) * std::log10(h_bs) +
           (43.42 - 3.1 * std::log10(h_bs)) * (std::log10(d3d) - 3.0) + 20.0 * std::log10(fc_ghz) -
           (3.2 * lh * lh - 4.97);
}

}  // namespace detail

/// RMa path loss in dB. NLoS is never below LoS at the same distance.
inline double path_loss_db(double dist3d_m, LinkState link, const ScenarioConfig& c)
{
    if (!(dist3d_m > 0.0)) {
        throw DomainError("path_loss_db: distance must be positive");
    }
    const double los = detail::rma_los(c, dist3d_m);
    if (link == LinkState::LoS) {
        return los;
    }
    return std::max(los, detail::rma_nlos_prime(c, dist3d_m));
}

inline double noise_power_w(const ScenarioConfig& c) { return dbm_to_watt(c.noise_psd_dbm_hz) * c.bandwidth_hz; }

struct LinkBudget {
    double gamma_per_watt = 0.0;
    double pl_los_db = 0.0;
    double pl_nlos_db = 0.0;
    double p_los = 1.0;
    double noise_w = 0.0;
    double g_ue = kUeGain;
};

/// Position-dependent part of gamma: gamma = G_gNB * (c_los |h_L|^2 +
/// c_nlos |h_N|^2). Lets the solver redraw fading without recomputing path
/// loss.
struct LinkCoefficients {
    double c_los = 0.0;
    double c_nlos = 0.0;

    double gamma(double gain_gnb, double fading_los, double fading_nlos) const
    {
        return gain_gnb * (c_los * fading_los + c_nlos * fading_nlos);
    }
};

inline LinkBudget link_budget(const UeSample& ue, double gain_gnb, const ScenarioConfig& c)
{
    LinkBudget b;
    b.p_los = los_probability(ue.dist2d_m);
    b.pl_los_db = path_loss_db(ue.dist3d_m, LinkState::LoS, c) + ue.shadow_los_db;
    b.pl_nlos_db = path_loss_db(ue.dist3d_m, LinkState::NLoS, c) + ue.shadow_nlos_db;
    b.noise_w = noise_power_w(c);
    const double h_l = ue.fading_los / db_to_linear(b.pl_los_db);
    const double h_n = ue.fading_nlos / db_to_linear(b.pl_nlos_db);
    b.gamma_per_watt = (h_l * b.p_los + h_n * (1.0 - b.p_los)) * gain_gnb * b.g_ue / b.noise_w;
    return b;
}

inline LinkCoefficients link_coefficients(const UeSample& ue, const ScenarioConfig& c)
{
    const double p_los = los_probability(ue.dist2d_m);
    const double pl_los = path_loss_db(ue.dist3d_m, LinkState::LoS, c) + ue.shadow_los_db;
    const double pl_nlos = path_loss_db(ue.dist3d_m, LinkState::NLoS, c) + ue.shadow_nlos_db;
    const double scale = kUeGain / noise_power_w(c);
    return {p_los * scale / db_to_linear(pl_los), (1.0 - p_los) * scale / db_to_linear(pl_nlos)};
}

/// gamma_k for the UE's own fading draws.
inline LinkBudget snr_factor(const UeSample& ue, double gain_gnb, const ScenarioConfig& c)
{
    return link_budget(ue, gain_gnb, c);
}

}  // namespace beamopt
