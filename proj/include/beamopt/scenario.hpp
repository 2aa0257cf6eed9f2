// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration and per-UE sampling.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "beamopt/antenna.hpp"
#include "beamopt/power.hpp"
#include "beamopt/rng.hpp"
#include "beamopt/timing.hpp"
#include "beamopt/units.hpp"

namespace beamopt {

/// Raised for invalid configuration; key_path names the offending field
/// ("t_ss_s", "power_model.pae", ...).
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key_path, const std::string& what)
        : std::invalid_argument(key_path + ": " + what), key_path_(std::move(key_path))
    {
    }
    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

/// How small-scale fading evolves while the solver scans array sizes.
enum class FadingMode {
    /// Fresh fading draw for every candidate array size.
    PerCandidate,
    /// One draw per (iteration, UE), shared by all candidates.
    PerIteration,
};

struct ScenarioConfig {
    double cell_radius_m = 100.0;
    double gnb_height_m = 35.0;
    double ue_height_m = 1.5;
    int num_ues = 50;
    double ue_speed_mps = 1.0;
    double carrier_hz = 28e9;
    double bandwidth_hz = 50e6;
    double noise_psd_dbm_hz = -174.0;
    int numerology = 4;
    double max_tx_power_dbm = 18.0;
    double snr_threshold_db = 7.0;
    double misdetection_prob = 0.0;
    int n_ss = 8;
    double t_ss_s = 20e-3;
    int mc_iterations = 100000;
    std::uint64_t master_seed = 1;
    bool shadowing_enabled = false;

    /// RMa environment parameters.
    double building_height_m = 14.0;
    double street_width_m = 20.0;

    FadingMode fading_mode = FadingMode::PerCandidate;
    /// Smallest array size the search may return. A single element has no
    /// main lobe, so the default starts at 2.
    int min_antennas = 2;
    /// Tolerated fraction of infeasible iterations.
    double eps_feas = 0.0;

    PowerModel power;

    bool operator==(const ScenarioConfig&) const = default;
};

inline void validate(const ScenarioConfig& c)
{
    auto positive = [](double x, const char* key) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw ConfigError(key, "must be a finite positive number");
        }
    };
    auto finite = [](double x, const char* key) {
        if (!std::isfinite(x)) {
            throw ConfigError(key, "must be finite");
        }
    };
    positive(c.cell_radius_m, "cell_radius_m");
    positive(c.gnb_height_m, "gnb_height_m");
    if (!(c.ue_height_m >= 0.0) || !(c.ue_height_m < c.gnb_height_m)) {
        throw ConfigError("ue_height_m", "must satisfy 0 <= ue_height_m < gnb_height_m");
    }
    if (c.num_ues < 1) {
        throw ConfigError("num_ues", "must be a positive integer");
    }
    if (!(c.ue_speed_mps >= 0.0) || !std::isfinite(c.ue_speed_mps)) {
        throw ConfigError("ue_speed_mps", "must be finite and non-negative");
    }
    positive(c.carrier_hz, "carrier_hz");
    positive(c.bandwidth_hz, "bandwidth_hz");
    finite(c.noise_psd_dbm_hz, "noise_psd_dbm_hz");
    if (c.numerology < 0 || c.numerology > 6) {
        throw ConfigError("numerology", "must lie in [0, 6]");
    }
    finite(c.max_tx_power_dbm, "max_tx_power_dbm");
    finite(c.snr_threshold_db, "snr_threshold_db");
    if (!(c.misdetection_prob >= 0.0 && c.misdetection_prob <= 1.0)) {
        throw ConfigError("misdetection_prob", "must lie in [0, 1]");
    }
    if (!is_valid_burst_size(c.n_ss)) {
        throw ConfigError("n_ss", "must be one of 8, 16, 32, 64");
    }
    try {
        canonical_burst_period(c.t_ss_s);
    } catch (const std::invalid_argument&) {
        throw ConfigError("t_ss_s", "must be one of 5e-3, 10e-3, 20e-3, 40e-3, 80e-3, 160e-3");
    }
    if (c.mc_iterations < 1) {
        throw ConfigError("mc_iterations", "must be a positive integer");
    }
    positive(c.building_height_m, "building_height_m");
    positive(c.street_width_m, "street_width_m");
    if (c.min_antennas < kMinAntennas || c.min_antennas > kMaxAntennas) {
        throw ConfigError("min_antennas", "must lie in [1, 64]");
    }
    if (!(c.eps_feas >= 0.0 && c.eps_feas <= 1.0)) {
        throw ConfigError("eps_feas", "must lie in [0, 1]");
    }
    try {
        validate(c.power);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("power_model", e.what());
    }
}

struct UeSample {
    double phi_rad = 0.0;
    double dist2d_m = 0.0;
    double dist3d_m = 0.0;
    double fading_los = 1.0;   ///< |h_L|^2
    double fading_nlos = 1.0;  ///< |h_N|^2
    double shadow_los_db = 0.0;
    double shadow_nlos_db = 0.0;
};

/// Shadowing standard deviations of the RMa model (dB).
inline constexpr double kShadowSigmaLosDb = 4.0;
inline constexpr double kShadowSigmaNlosDb = 8.0;

/// Inverse CDF of the uniform-in-disc radius: d = R sqrt(u).
inline double radius_from_uniform(double u, double radius_m) { return radius_m * std::sqrt(u); }

inline double dist3d(const ScenarioConfig& c, double dist2d_m)
{
    const double dh = c.gnb_height_m - c.ue_height_m;
    return std::sqrt(dh * dh + dist2d_m * dist2d_m);
}

/// Geometry from two uniforms; exposed so boundary draws can be checked.
inline UeSample place_ue(const ScenarioConfig& c, double u_phi, double u_dist)
{
    UeSample s;
    s.phi_rad = kTwoPi * u_phi;
    if (s.phi_rad >= kTwoPi) {
        s.phi_rad = 0.0;
    }
    s.dist2d_m = radius_from_uniform(u_dist, c.cell_radius_m);
    s.dist3d_m = dist3d(c, s.dist2d_m);
    return s;
}

/// Substream ids for one UE in one Monte Carlo iteration.
inline StreamId position_stream(std::uint64_t iteration, std::uint32_t ue)
{
    return {iteration, ue, StreamPurpose::Position, 0};
}

inline StreamId fading_stream(std::uint64_t iteration, std::uint32_t ue, std::uint32_t candidate = 0)
{
    return {iteration, ue, StreamPurpose::Fading, candidate};
}

/// Draws one UE: position from `stream`, then fading (and shadowing, when
/// enabled) from the same stream. The radius uniform is drawn on (0, 1] so
/// no UE lands exactly on the apex.
inline UeSample sample_ue(const ScenarioConfig& c, RandomStream& stream)
{
    const double u_phi = stream.uniform();
    const double u_dist = stream.uniform_open0();
    UeSample s = place_ue(c, u_phi, u_dist);
    s.fading_los = stream.exponential();
    s.fading_nlos = stream.exponential();
    if (c.shadowing_enabled) {
        s.shadow_los_db = kShadowSigmaLosDb * stream.normal();
        s.shadow_nlos_db = kShadowSigmaNlosDb * stream.normal();
    }
    return s;
}

/// UE `ue` of iteration `iteration`, independent of evaluation order.
inline UeSample sample_ue(const ScenarioConfig& c, std::uint64_t iteration, std::uint32_t ue)
{
    RandomStream stream(c.master_seed, position_stream(iteration, ue));
    return sample_ue(c, stream);
}

}  // namespace beamopt
