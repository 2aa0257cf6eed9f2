// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "beamopt/analysis.hpp"

using namespace beamopt;

namespace {

// Midpoint-rule evaluation of the disc average of E|U + vT/y|, with U
// uniform on the half-power beamwidth and the inner mean done by a second
// midpoint rule.
double theta_bar_oracle(double delta, double vt, double radius)
{
    const int outer = 4000;
    const int inner = 4000;
    double total = 0.0;
    for (int i = 0; i < outer; ++i) {
        const double y = (i + 0.5) * radius / outer;
        const double a = vt / y;
        double m = 0.0;
        for (int j = 0; j < inner; ++j) {
            const double x = -delta / 2 + (j + 0.5) * delta / inner;
            m += std::abs(x + a);
        }
        m = delta > 0.0 ? m / inner : a;
        total += m * 2.0 * y / (radius * radius) * (radius / outer);
    }
    return total;
}

FeasibilityGrid synthetic_grid()
{
    FeasibilityGrid g;
    auto add = [&](int n_ss, double t, bool ok) {
        FeasibilityCell c;
        c.n_ss = n_ss;
        c.t_ss_s = t;
        c.v_mps = 5.0;
        c.num_ues = 200;
        c.feasible = ok;
        g.cells.push_back(c);
    };
    add(8, 5e-3, true);
    add(8, 10e-3, true);
    add(8, 20e-3, false);
    add(16, 5e-3, true);
    add(16, 40e-3, true);
    add(32, 160e-3, true);
    return g;
}

}  // namespace

TEST(Analysis, ShiftedUniformMean)
{
    EXPECT_DOUBLE_EQ(mean_abs_shifted_uniform(0.0, 0.4), 0.1);
    EXPECT_DOUBLE_EQ(mean_abs_shifted_uniform(0.3, 0.4), 0.3);
    EXPECT_DOUBLE_EQ(mean_abs_shifted_uniform(0.2, 0.4), 0.2);
    // a = 0.1, delta = 0.4: ((0.3)^2 + (0.1)^2) / 0.8
    EXPECT_NEAR(mean_abs_shifted_uniform(0.1, 0.4), 0.125, 1e-15);
}

TEST(Analysis, StationaryAverageIsQuarterBeamwidth)
{
    for (int n : {1, 4, 16, 64}) {
        const OffsetBreakdown r = analytic_theta_bar(n, 8, 20e-3, 0.0, 100.0);
        EXPECT_NEAR(r.theta_bar, half_power_beamwidth(n) / 4.0, 1e-9);
        EXPECT_NEAR(r.theta_bar_i, half_power_beamwidth(n) / 4.0, 1e-9);
        EXPECT_NEAR(r.theta_bar_v, 0.0, 1e-12);
    }
}

TEST(Analysis, MobilityComponentClosedForm)
{
    for (int n : {4, 16, 40}) {
        for (double v : {1.0, 4.0, 10.0}) {
            const double t_bm = burst_timing(n, 8, 40e-3, 4).t_bm_s;
            const OffsetBreakdown r = analytic_theta_bar(n, 8, 40e-3, v, 100.0);
            EXPECT_NEAR(r.theta_bar_v, 2.0 * v * t_bm / 100.0, 1e-9);
            EXPECT_GE(r.theta_bar, std::max(r.theta_bar_i, r.theta_bar_v) - 1e-12);
            EXPECT_LE(r.theta_bar, r.theta_bar_i + r.theta_bar_v + 1e-12);
        }
    }
}

TEST(Analysis, QuadratureMatchesMidpointOracle)
{
    for (int n : {2, 8, 16, 48}) {
        for (double v : {2.0, 4.0}) {
            for (double t : {20e-3, 80e-3}) {
                const double vt = v * burst_timing(n, 8, t, 4).t_bm_s;
                const OffsetBreakdown r = analytic_theta_bar(n, 8, t, v, 100.0);
                EXPECT_NEAR(r.theta_bar, theta_bar_oracle(half_power_beamwidth(n), vt, 100.0), 1e-6 * r.theta_bar)
                    << "n=" << n << " v=" << v << " t=" << t;
            }
        }
    }
}

TEST(Analysis, AverageGrowsWithSpeed)
{
    double prev = 0.0;
    for (double v = 0.0; v <= 10.0; v += 0.5) {
        const double t = analytic_theta_bar(32, 8, 40e-3, v, 100.0).theta_bar;
        EXPECT_GE(t, prev);
        prev = t;
    }
}

TEST(Analysis, MonteCarloAgreesWithQuadrature)
{
    const ScenarioConfig c;
    const McOffsetEstimate mc = mc_theta_bar(16, 16, 40e-3, 4.0, c, 100000);
    const OffsetBreakdown an = analytic_theta_bar(16, 16, 40e-3, 4.0, c.cell_radius_m);
    EXPECT_EQ(mc.interior_samples, 100000);
    EXPECT_GT(mc.all_samples, mc.interior_samples);
    const double tol = std::max(0.005 * an.theta_bar, 3.0 * mc.interior_std_error);
    EXPECT_NEAR(mc.interior.theta_bar, an.theta_bar, tol);
}

TEST(Analysis, MonteCarloStationary)
{
    const ScenarioConfig c;
    for (int n : {4, 16}) {
        const McOffsetEstimate mc = mc_theta_bar(n, 8, 20e-3, 0.0, c, 50000);
        EXPECT_NEAR(mc.interior.theta_bar, half_power_beamwidth(n) / 4.0, 3.0 * mc.interior_std_error);
    }
}

TEST(Analysis, MonteCarloReproducible)
{
    ScenarioConfig c;
    const McOffsetEstimate a = mc_theta_bar(8, 8, 20e-3, 2.0, c, 5000);
    const McOffsetEstimate b = mc_theta_bar(8, 8, 20e-3, 2.0, c, 5000);
    EXPECT_EQ(a.interior.theta_bar, b.interior.theta_bar);
    EXPECT_THROW(mc_theta_bar(8, 8, 20e-3, 2.0, c, 1), std::invalid_argument);
}

TEST(Analysis, FeasibilityBound)
{
    EXPECT_NEAR(feasibility_bound(8.0, 8, 10.0, 0.125), 10.0 * (std::asin(0.25) - 0.125) / 3.0, 1e-12);
    EXPECT_NEAR(feasibility_bound(8.0, 8, 10.0, 0.125), 0.426, 0.001);
    EXPECT_NEAR(feasibility_bound(8.0, 8, 10.0, 0.5 * first_null_beamwidth(8.0)), 0.0, 1e-15);
    EXPECT_TRUE(std::isinf(feasibility_bound(8.0, 32, 10.0, 0.125)));
    EXPECT_THROW(feasibility_bound(1.5, 8, 10.0, 0.1), DomainError);
    // Larger N_SS never tightens the bound.
    for (double n = 2.0; n <= 64.0; n += 0.37) {
        double prev = -1.0;
        for (int n_ss : {8, 16, 32, 64}) {
            const double b = feasibility_bound(n, n_ss, 10.0, 0.5 * half_power_beamwidth(n));
            EXPECT_GE(b, prev);
            prev = b;
        }
    }
}

TEST(Analysis, RecommendCheapestFeasible)
{
    const FeasibilityGrid g = synthetic_grid();
    const Recommendation r = recommend_config(g, 200, 0.0, 5.0);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.n_ss, 8);
    EXPECT_DOUBLE_EQ(r.t_ss_s, 10e-3);
    EXPECT_FALSE(recommend_config(g, 500, 0.0, 5.0).found);
    FeasibilityGrid none = g;
    for (auto& c : none.cells) {
        c.feasible = false;
    }
    EXPECT_FALSE(recommend_config(none, 200, 0.0, 5.0).found);
}

TEST(Analysis, SweepIsDownwardClosedAndBisectionAgrees)
{
    ScenarioConfig base;
    base.mc_iterations = 300;
    FeasibilityAxes axes;
    axes.n_ss = {8, 16};
    axes.num_ues = {20, 50};
    axes.v_mps = {5.0, 10.0};
    SweepOptions full;
    full.exhaustive = true;
    const FeasibilityGrid ex = sweep_feasibility(base, axes, full);
    const FeasibilityGrid bi = sweep_feasibility(base, axes);
    ASSERT_EQ(ex.cells.size(), bi.cells.size());
    ASSERT_EQ(ex.cells.size(), 2u * 2u * 2u * 6u);
    for (std::size_t i = 0; i < ex.cells.size(); ++i) {
        EXPECT_EQ(ex.cells[i].feasible, bi.cells[i].feasible) << i;
        for (const auto& other : ex.cells) {
            if (other.n_ss == ex.cells[i].n_ss && other.num_ues == ex.cells[i].num_ues && other.feasible &&
                ex.cells[i].vt_m() < other.vt_m()) {
                EXPECT_TRUE(ex.cells[i].feasible) << "vt " << ex.cells[i].vt_m() << " below feasible " << other.vt_m();
            }
        }
    }
    for (const auto& s : ex.slices) {
        const FeasibilitySlice* b = bi.slice(s.n_ss, s.num_ues, s.misdetection_prob);
        ASSERT_NE(b, nullptr);
        EXPECT_EQ(s.max_feasible_vt_m, b->max_feasible_vt_m);
    }
    // A larger burst size never shrinks the feasible region.
    for (int k : {20, 50}) {
        const auto a = ex.slice(8, k, 0.0)->max_feasible_vt_m.value_or(-1.0);
        const auto b = ex.slice(16, k, 0.0)->max_feasible_vt_m.value_or(-1.0);
        EXPECT_GE(b, a);
    }
}
