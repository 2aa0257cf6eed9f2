// SPDX-License-Identifier: Apache-2.0
//
// Average angular offset (quadrature and Monte Carlo), the worst-case
// feasibility bound on v * T_SS, feasibility-grid sweeps and the
// (N_SS, T_SS) selection rule.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "beamopt/antenna.hpp"
#include "beamopt/rng.hpp"
#include "beamopt/scenario.hpp"
#include "beamopt/solver.hpp"
#include "beamopt/timing.hpp"

namespace beamopt {

struct OffsetBreakdown {
    double theta_bar = 0.0;
    double theta_bar_i = 0.0;
    double theta_bar_v = 0.0;
};

/// E|x + a| for x uniform on [-delta/2, delta/2] and a >= 0.
inline double mean_abs_shifted_uniform(double a, double delta)
{
    const double h = 0.5 * delta;
    if (a >= h) {
        return a;
    }
    return ((h + a) * (h + a) + (h - a) * (h - a)) / (2.0 * delta);
}

namespace detail {

/// Integral over the disc of E|theta_i + v T_BM / y| with radial density
/// 2y / R^2. delta = 0 drops the initial offset, vt = 0 the mobility term.
inline double outer_offset_integral(double delta, double vt, double radius_m)
{
    using boost::math::quadrature::gauss_kronrod;
    const double r2 = radius_m * radius_m;
    auto integrand = [&](double y) {
        if (y <= 0.0) {
            return 2.0 * vt / r2;
        }
        return mean_abs_shifted_uniform(vt / y, delta) * 2.0 * y / r2;
    };
    constexpr double kTol = 1e-9;
    double error = 0.0;
    // The integrand has a kink where v T_BM / y = delta / 2.
    const double kink = delta > 0.0 ? 2.0 * vt / delta : radius_m;
    if (kink > 0.0 && kink < radius_m) {
        const double a = gauss_kronrod<double, 31>::integrate(integrand, 0.0, kink, 15, kTol, &error);
        const double b = gauss_kronrod<double, 31>::integrate(integrand, kink, radius_m, 15, kTol, &error);
        return a + b;
    }
    return gauss_kronrod<double, 31>::integrate(integrand, 0.0, radius_m, 15, kTol, &error);
}

}  // namespace detail

/// Average offset over a uniform disc of radius R for one array size and
/// burst configuration. Beams are treated as exactly tiling the azimuth.
inline OffsetBreakdown analytic_theta_bar(int n_gnb, int n_ss, double t_ss_s, double v_mps, double radius_m,
                                          int numerology = 4)
{
    if (!(radius_m > 0.0)) {
        throw std::invalid_argument("analytic_theta_bar: radius must be positive");
    }
    const double delta = half_power_beamwidth(n_gnb);
    const double vt = v_mps * burst_timing(n_gnb, n_ss, t_ss_s, numerology).t_bm_s;
    OffsetBreakdown r;
    r.theta_bar = detail::outer_offset_integral(delta, vt, radius_m);
    r.theta_bar_i = detail::outer_offset_integral(delta, 0.0, radius_m);
    r.theta_bar_v = detail::outer_offset_integral(0.0, vt, radius_m);
    return r;
}

struct McOffsetEstimate {
    /// Means over UEs served by beams away from the 2 pi seam, where the
    /// initial offset is uniform on the half-power beamwidth.
    OffsetBreakdown interior;
    double interior_std_error = 0.0;
    std::int64_t interior_samples = 0;
    /// Means over every draw, seam beams included.
    OffsetBreakdown all;
    double all_std_error = 0.0;
    std::int64_t all_samples = 0;
};

namespace detail {

struct RunningMean {
    std::int64_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_i = 0.0;
    double sum_v = 0.0;

    void add(double theta, double theta_i, double theta_v)
    {
        ++n;
        sum += theta;
        sum_sq += theta * theta;
        sum_i += theta_i;
        sum_v += theta_v;
    }
    OffsetBreakdown mean() const
    {
        const auto k = static_cast<double>(n);
        return {sum / k, sum_i / k, sum_v / k};
    }
    double std_error() const
    {
        const auto k = static_cast<double>(n);
        const double m = sum / k;
        const double var = std::max(0.0, (sum_sq / k - m * m) * k / (k - 1.0));
        return std::sqrt(var / k);
    }
};

}  // namespace detail

/// Monte Carlo estimate of the average offset. Draws UEs until `samples` of
/// them fall on interior beams. Positions come from the scenario's seed on a
/// dedicated stream, so results are reproducible.
inline McOffsetEstimate mc_theta_bar(int n_gnb, int n_ss, double t_ss_s, double v_mps, const ScenarioConfig& scenario,
                                     std::int64_t samples)
{
    if (samples < 2) {
        throw std::invalid_argument("mc_theta_bar: need at least two samples");
    }
    const BeamConfig beams = make_beam_config(n_gnb);
    const BurstTiming timing = burst_timing(n_gnb, n_ss, t_ss_s, scenario.numerology);
    const auto key = static_cast<std::uint32_t>(n_gnb) | (static_cast<std::uint32_t>(n_ss) << 8);
    RandomStream stream(scenario.master_seed, {0, key, StreamPurpose::OffsetSample, 0});
    detail::RunningMean interior;
    detail::RunningMean all;
    std::uint64_t block = 0;
    while (interior.n < samples) {
        // One sub-stream per 1000 draws keeps the per-stream block counter
        // in range for large sample counts.
        if (all.n > 0 && all.n % 1000 == 0) {
            ++block;
            stream = RandomStream(scenario.master_seed, {block, key, StreamPurpose::OffsetSample, 0});
        }
        const UeSample ue = place_ue(scenario, stream.uniform(), stream.uniform_open0());
        const BeamAssignment a = initial_beam_and_offset(ue.phi_rad, beams);
        const double theta_v = mobility_offset(ue.dist2d_m, v_mps, timing);
        const double theta = total_offset(a.offset_rad, theta_v);
        all.add(theta, std::abs(a.offset_rad), theta_v);
        if (!is_seam_beam(a.beam, beams.sector_count)) {
            interior.add(theta, std::abs(a.offset_rad), theta_v);
        }
    }
    McOffsetEstimate r;
    r.interior = interior.mean();
    r.interior_std_error = interior.std_error();
    r.interior_samples = interior.n;
    r.all = all.mean();
    r.all_std_error = all.std_error();
    r.all_samples = all.n;
    return r;
}

/// Largest v * T_SS that keeps a UE at distance d_min with initial offset
/// theta_i_max inside the first-null beamwidth. +inf when the sweep fits in
/// one burst, since T_SS then never enters the sweep time.
inline double feasibility_bound(double n_star_gnb, int n_ss, double d_min_m, double theta_i_max_rad)
{
    if (!(n_star_gnb >= 2.0)) {
        throw DomainError("feasibility_bound: requires n_star_gnb >= 2");
    }
    if (!is_valid_burst_size(n_ss)) {
        throw std::invalid_argument("feasibility_bound: n_ss must be one of 8, 16, 32, 64");
    }
    const int sectors = sector_count_real(n_star_gnb);
    const int extra_bursts = (sectors + n_ss - 1) / n_ss - 1;
    if (extra_bursts == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return d_min_m * (0.5 * first_null_beamwidth(n_star_gnb) - theta_i_max_rad) / extra_bursts;
}

struct FeasibilityAxes {
    std::vector<int> n_ss{8, 16, 32, 64};
    std::vector<double> t_ss_s{kBurstPeriodsS.begin(), kBurstPeriodsS.end()};
    std::vector<double> v_mps{5.0};
    std::vector<int> num_ues{50};
    std::vector<double> misdetection_prob{0.0};
};

enum class CellStatus {
    Solved,
    InferredFeasible,    ///< a larger v * T_SS on the slice was feasible
    InferredInfeasible,  ///< a smaller v * T_SS on the slice was infeasible
};

struct FeasibilityCell {
    int n_ss = 8;
    double t_ss_s = 0.0;
    double v_mps = 0.0;
    int num_ues = 0;
    double misdetection_prob = 0.0;
    bool feasible = false;
    CellStatus status = CellStatus::Solved;
    std::optional<SolveResult> result;

    double vt_m() const { return v_mps * t_ss_s; }
};

/// One (N_SS, K, P_MD) slice of the grid.
struct FeasibilitySlice {
    int n_ss = 8;
    int num_ues = 0;
    double misdetection_prob = 0.0;
    /// Largest feasible grid product; nullopt means no cell is feasible.
    std::optional<double> max_feasible_vt_m;
    /// Average array size at the smallest product solved on the slice.
    double n_star = std::numeric_limits<double>::quiet_NaN();
    /// Worst-case bound at that array size; NaN when undefined.
    double analytic_bound_m = std::numeric_limits<double>::quiet_NaN();
};

struct FeasibilityGrid {
    FeasibilityAxes axes;
    std::vector<FeasibilityCell> cells;
    std::vector<FeasibilitySlice> slices;

    const FeasibilitySlice* slice(int n_ss, int num_ues, double p_md) const
    {
        for (const auto& s : slices) {
            if (s.n_ss == n_ss && s.num_ues == num_ues && s.misdetection_prob == p_md) {
                return &s;
            }
        }
        return nullptr;
    }
};

struct SweepOptions {
    SolveOptions solve;
    /// Solve every cell instead of bisecting on v * T_SS.
    bool exhaustive = false;
    /// d_min for the analytic overlay; theta_i_max is half the beamwidth.
    double overlay_d_min_m = 10.0;
    std::function<void(const std::string&)> progress;
};

namespace detail {

inline FeasibilityCell solve_cell(const ScenarioConfig& base, const FeasibilityCell& proto, const SweepOptions& opt)
{
    ScenarioConfig c = base;
    c.n_ss = proto.n_ss;
    c.t_ss_s = proto.t_ss_s;
    c.ue_speed_mps = proto.v_mps;
    c.num_ues = proto.num_ues;
    c.misdetection_prob = proto.misdetection_prob;
    SolveOptions so = opt.solve;
    so.stop_when_infeasible = so.stop_when_infeasible || !opt.exhaustive;
    FeasibilityCell cell = proto;
    cell.result = solve(make_problem(c), so);
    cell.feasible = cell.result->feasible;
    cell.status = CellStatus::Solved;
    if (opt.progress) {
        opt.progress("n_ss=" + std::to_string(cell.n_ss) + " k=" + std::to_string(cell.num_ues) +
                     " p_md=" + std::to_string(cell.misdetection_prob) + " v=" + std::to_string(cell.v_mps) +
                     " t_ss=" + std::to_string(cell.t_ss_s) + (cell.feasible ? " feasible" : " infeasible"));
    }
    return cell;
}

}  // namespace detail

/// Solves the grid slice by slice. Unless `exhaustive` is set, relies on
/// feasibility being downward closed in v * T_SS and bisects over the
/// sorted distinct products, filling the remaining cells by inference.
inline FeasibilityGrid sweep_feasibility(const ScenarioConfig& base, const FeasibilityAxes& axes,
                                         const SweepOptions& opt = {})
{
    FeasibilityGrid grid;
    grid.axes = axes;
    for (int n_ss : axes.n_ss) {
        for (int k : axes.num_ues) {
            for (double p_md : axes.misdetection_prob) {
                std::vector<FeasibilityCell> cells;
                for (double v : axes.v_mps) {
                    for (double t : axes.t_ss_s) {
                        FeasibilityCell c;
                        c.n_ss = n_ss;
                        c.t_ss_s = t;
                        c.v_mps = v;
                        c.num_ues = k;
                        c.misdetection_prob = p_md;
                        cells.push_back(c);
                    }
                }
                // Stable order: by product, then by the axis order above.
                std::vector<std::size_t> order(cells.size());
                for (std::size_t i = 0; i < order.size(); ++i) {
                    order[i] = i;
                }
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) { return cells[a].vt_m() < cells[b].vt_m(); });
                std::vector<bool> solved(cells.size(), false);

                if (opt.exhaustive) {
                    for (std::size_t i : order) {
                        cells[i] = detail::solve_cell(base, cells[i], opt);
                        solved[i] = true;
                    }
                } else {
                    // Distinct products, each represented by its first cell.
                    std::vector<std::size_t> reps;
                    for (std::size_t i : order) {
                        if (reps.empty() || cells[i].vt_m() != cells[reps.back()].vt_m()) {
                            reps.push_back(i);
                        }
                    }
                    // Find the count of feasible products: lo feasible, hi not.
                    std::ptrdiff_t lo = -1;
                    auto hi = static_cast<std::ptrdiff_t>(reps.size());
                    while (hi - lo > 1) {
                        const std::ptrdiff_t mid = lo + (hi - lo) / 2;
                        const std::size_t i = reps[static_cast<std::size_t>(mid)];
                        cells[i] = detail::solve_cell(base, cells[i], opt);
                        solved[i] = true;
                        if (cells[i].feasible) {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    const double edge = lo >= 0 ? cells[reps[static_cast<std::size_t>(lo)]].vt_m()
                                                : -std::numeric_limits<double>::infinity();
                    for (std::size_t i = 0; i < cells.size(); ++i) {
                        if (!solved[i]) {
                            cells[i].feasible = cells[i].vt_m() <= edge;
                            cells[i].status =
                                cells[i].feasible ? CellStatus::InferredFeasible : CellStatus::InferredInfeasible;
                        }
                    }
                }

                FeasibilitySlice s;
                s.n_ss = n_ss;
                s.num_ues = k;
                s.misdetection_prob = p_md;
                for (const auto& c : cells) {
                    if (c.feasible && (!s.max_feasible_vt_m || c.vt_m() > *s.max_feasible_vt_m)) {
                        s.max_feasible_vt_m = c.vt_m();
                    }
                }
                for (std::size_t i : order) {
                    if (solved[i] && cells[i].result && std::isfinite(cells[i].result->n_star)) {
                        s.n_star = cells[i].result->n_star;
                        break;
                    }
                }
                if (s.n_star >= 2.0) {
                    s.analytic_bound_m =
                        feasibility_bound(s.n_star, n_ss, opt.overlay_d_min_m, 0.5 * half_power_beamwidth(s.n_star));
                }
                grid.slices.push_back(s);
                for (auto& c : cells) {
                    grid.cells.push_back(std::move(c));
                }
            }
        }
    }
    return grid;
}

struct Recommendation {
    bool found = false;
    int n_ss = 0;
    double t_ss_s = 0.0;
};

/// Cheapest sweep setting on one (K, P_MD, v) slice: the smallest feasible
/// N_SS, then the longest feasible T_SS for it.
inline Recommendation recommend_config(const FeasibilityGrid& grid, int num_ues, double misdetection_prob,
                                       double v_mps)
{
    Recommendation best;
    for (const auto& c : grid.cells) {
        if (!c.feasible || c.num_ues != num_ues || c.misdetection_prob != misdetection_prob || c.v_mps != v_mps) {
            continue;
        }
        if (!best.found || c.n_ss < best.n_ss || (c.n_ss == best.n_ss && c.t_ss_s > best.t_ss_s)) {
            best = {true, c.n_ss, c.t_ss_s};
        }
    }
    return best;
}

}  // namespace beamopt
