// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "beamopt/config_io.hpp"

using namespace beamopt;

namespace {

std::string key_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key_path();
    }
    return "<none>";
}

}  // namespace

TEST(ConfigIo, DefaultsRoundTrip)
{
    const ScenarioConfig c;
    EXPECT_EQ(parse_config(canonical_dump(c)), c);
    EXPECT_EQ(parse_config("{}"), c);
}

TEST(ConfigIo, ModifiedRoundTrip)
{
    ScenarioConfig c;
    c.num_ues = 200;
    c.misdetection_prob = 0.05;
    c.t_ss_s = 160e-3;
    c.master_seed = 0xfedcba9876543210ULL;
    c.fading_mode = FadingMode::PerIteration;
    c.shadowing_enabled = true;
    c.power.pae = 0.31;
    c.min_antennas = 1;
    const ScenarioConfig back = parse_config(canonical_dump(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(canonical_dump(back), canonical_dump(c));
}

TEST(ConfigIo, PartialOverlay)
{
    const ScenarioConfig c = parse_config(R"({"num_ues": 500, "power_model": {"p_ps_w": 0.03}})");
    EXPECT_EQ(c.num_ues, 500);
    EXPECT_DOUBLE_EQ(c.power.p_ps_w, 0.03);
    EXPECT_DOUBLE_EQ(c.power.pae, PowerModel{}.pae);
}

TEST(ConfigIo, ErrorsNameTheKey)
{
    EXPECT_EQ(key_of(R"({"num_uez": 5})"), "num_uez");
    EXPECT_EQ(key_of(R"({"power_model": {"p_foo": 1}})"), "power_model.p_foo");
    EXPECT_EQ(key_of(R"({"num_ues": "many"})"), "num_ues");
    EXPECT_EQ(key_of(R"({"num_ues": 2.5})"), "num_ues");
    EXPECT_EQ(key_of(R"({"shadowing_enabled": 1})"), "shadowing_enabled");
    EXPECT_EQ(key_of(R"({"fading_mode": "sometimes"})"), "fading_mode");
    EXPECT_EQ(key_of(R"({"master_seed": -3})"), "master_seed");
    EXPECT_EQ(key_of(R"({"t_ss_s": 0.03})"), "t_ss_s");
    EXPECT_EQ(key_of("{not json"), "$");
    EXPECT_EQ(key_of("[1, 2]"), "$");
}

TEST(ConfigIo, DigestStableAndSensitive)
{
    const ScenarioConfig c;
    const std::string d = config_digest(c);
    EXPECT_EQ(d.size(), 16u);
    EXPECT_EQ(d, config_digest(parse_config(canonical_dump(c))));
    ScenarioConfig other = c;
    other.master_seed = 2;
    EXPECT_NE(config_digest(other), d);
}

TEST(ConfigIo, LoadFromFile)
{
    const std::string path = ::testing::TempDir() + "beamopt_cfg.json";
    {
        std::ofstream out(path);
        out << R"({"ue_speed_mps": 5, "n_ss": 16})";
    }
    const ScenarioConfig c = load_config(path);
    EXPECT_DOUBLE_EQ(c.ue_speed_mps, 5.0);
    EXPECT_EQ(c.n_ss, 16);
    std::remove(path.c_str());
    EXPECT_THROW(load_config(path), ConfigError);
}
