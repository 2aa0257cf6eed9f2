// SPDX-License-Identifier: Apache-2.0
//
// JSON (de)serialisation of ScenarioConfig and the content digest used in
// run manifests.
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "beamopt/power.hpp"
#include "beamopt/scenario.hpp"

namespace beamopt {

using Json = nlohmann::json;

inline const char* to_string(FadingMode m) { return m == FadingMode::PerCandidate ? "per_candidate" : "per_iteration"; }

inline Json to_json(const PowerModel& m)
{
    return Json{{"p_ps_w", m.p_ps_w},       {"p_mixer_w", m.p_mixer_w}, {"p_lo_w", m.p_lo_w},
                {"p_lpf_w", m.p_lpf_w},     {"p_bb_w", m.p_bb_w},       {"pae", m.pae},
                {"dac_bits", m.dac_bits},   {"dac_fs_hz", m.dac_fs_hz}};
}

inline Json to_json(const ScenarioConfig& c)
{
    return Json{
        {"cell_radius_m", c.cell_radius_m},
        {"gnb_height_m", c.gnb_height_m},
        {"ue_height_m", c.ue_height_m},
        {"num_ues", c.num_ues},
        {"ue_speed_mps", c.ue_speed_mps},
        {"carrier_hz", c.carrier_hz},
        {"bandwidth_hz", c.bandwidth_hz},
        {"noise_psd_dbm_hz", c.noise_psd_dbm_hz},
        {"numerology", c.numerology},
        {"max_tx_power_dbm", c.max_tx_power_dbm},
        {"snr_threshold_db", c.snr_threshold_db},
        {"misdetection_prob", c.misdetection_prob},
        {"n_ss", c.n_ss},
        {"t_ss_s", c.t_ss_s},
        {"mc_iterations", c.mc_iterations},
        {"master_seed", c.master_seed},
        {"shadowing_enabled", c.shadowing_enabled},
        {"building_height_m", c.building_height_m},
        {"street_width_m", c.street_width_m},
        {"fading_mode", to_string(c.fading_mode)},
        {"min_antennas", c.min_antennas},
        {"eps_feas", c.eps_feas},
        {"power_model", to_json(c.power)},
    };
}

namespace detail {

inline double read_number(const Json& v, const std::string& key)
{
    if (!v.is_number()) {
        throw ConfigError(key, "expected a number");
    }
    return v.get<double>();
}

inline int read_int(const Json& v, const std::string& key)
{
    if (v.is_number_integer()) {
        return v.get<int>();
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == static_cast<double>(static_cast<int>(d))) {
            return static_cast<int>(d);
        }
    }
    throw ConfigError(key, "expected an integer");
}

inline std::uint64_t read_u64(const Json& v, const std::string& key)
{
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError(key, "expected a non-negative 64-bit integer");
}

inline bool read_bool(const Json& v, const std::string& key)
{
    if (!v.is_boolean()) {
        throw ConfigError(key, "expected true or false");
    }
    return v.get<bool>();
}

inline void apply_power(PowerModel& m, const Json& obj)
{
    if (!obj.is_object()) {
        throw ConfigError("power_model", "expected an object");
    }
    for (const auto& [key, v] : obj.items()) {
        const std::string path = "power_model." + key;
        if (key == "p_ps_w") {
            m.p_ps_w = read_number(v, path);
        } else if (key == "p_mixer_w") {
            m.p_mixer_w = read_number(v, path);
        } else if (key == "p_lo_w") {
            m.p_lo_w = read_number(v, path);
        } else if (key == "p_lpf_w") {
            m.p_lpf_w = read_number(v, path);
        } else if (key == "p_bb_w") {
            m.p_bb_w = read_number(v, path);
        } else if (key == "pae") {
            m.pae = read_number(v, path);
        } else if (key == "dac_bits") {
            m.dac_bits = read_int(v, path);
        } else if (key == "dac_fs_hz") {
            m.dac_fs_hz = read_number(v, path);
        } else {
            throw ConfigError(path, "unknown key");
        }
    }
}

}  // namespace detail

/// Overlays the keys of `obj` on `c`. Unknown keys and type mismatches throw
/// ConfigError naming the key path. Does not validate ranges.
inline void apply_json(ScenarioConfig& c, const Json& obj)
{
    using namespace detail;
    if (!obj.is_object()) {
        throw ConfigError("$", "config must be a JSON object");
    }
    for (const auto& [key, v] : obj.items()) {
        if (key == "cell_radius_m") {
            c.cell_radius_m = read_number(v, key);
        } else if (key == "gnb_height_m") {
            c.gnb_height_m = read_number(v, key);
        } else if (key == "ue_height_m") {
            c.ue_height_m = read_number(v, key);
        } else if (key == "num_ues") {
            c.num_ues = read_int(v, key);
        } else if (key == "ue_speed_mps") {
            c.ue_speed_mps = read_number(v, key);
        } else if (key == "carrier_hz") {
            c.carrier_hz = read_number(v, key);
        } else if (key == "bandwidth_hz") {
            c.bandwidth_hz = read_number(v, key);
        } else if (key == "noise_psd_dbm_hz") {
            c.noise_psd_dbm_hz = read_number(v, key);
        } else if (key == "numerology") {
            c.numerology = read_int(v, key);
        } else if (key == "max_tx_power_dbm") {
            c.max_tx_power_dbm = read_number(v, key);
        } else if (key == "snr_threshold_db") {
            c.snr_threshold_db = read_number(v, key);
        } else if (key == "misdetection_prob") {
            c.misdetection_prob = read_number(v, key);
        } else if (key == "n_ss") {
            c.n_ss = read_int(v, key);
        } else if (key == "t_ss_s") {
            c.t_ss_s = read_number(v, key);
        } else if (key == "mc_iterations") {
            c.mc_iterations = read_int(v, key);
        } else if (key == "master_seed") {
            c.master_seed = read_u64(v, key);
        } else if (key == "shadowing_enabled") {
            c.shadowing_enabled = read_bool(v, key);
        } else if (key == "building_height_m") {
            c.building_height_m = read_number(v, key);
        } else if (key == "street_width_m") {
            c.street_width_m = read_number(v, key);
        } else if (key == "fading_mode") {
            const std::string s = v.is_string() ? v.get<std::string>() : "";
            if (s == "per_candidate") {
                c.fading_mode = FadingMode::PerCandidate;
            } else if (s == "per_iteration") {
                c.fading_mode = FadingMode::PerIteration;
            } else {
                throw ConfigError(key, "expected \"per_candidate\" or \"per_iteration\"");
            }
        } else if (key == "min_antennas") {
            c.min_antennas = read_int(v, key);
        } else if (key == "eps_feas") {
            c.eps_feas = read_number(v, key);
        } else if (key == "power_model") {
            apply_power(c.power, v);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
}

/// Parses a config document on top of the defaults and validates it.
inline ScenarioConfig parse_config(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    ScenarioConfig c;
    apply_json(c, j);
    validate(c);
    return c;
}

inline ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("$", "cannot open config file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Canonical text form: sorted keys, shortest round-trip numbers.
inline std::string canonical_dump(const ScenarioConfig& c) { return to_json(c).dump(); }

/// 64-bit FNV-1a over the canonical dump, as 16 hex digits.
inline std::string config_digest(const ScenarioConfig& c)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_dump(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace beamopt
