// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo search for the energy-minimal (array size, transmit power)
// pair. Each iteration drops K UEs, scans N upward to 64, accepts the
// first N that serves enough UEs at P_T, and back-solves the minimal power.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "beamopt/antenna.hpp"
#include "beamopt/channel.hpp"
#include "beamopt/parallel.hpp"
#include "beamopt/power.hpp"
#include "beamopt/rng.hpp"
#include "beamopt/scenario.hpp"
#include "beamopt/timing.hpp"

namespace beamopt {

enum class ProblemKind {
    P1,  ///< every UE must reach the SNR threshold
    P2,  ///< a fraction P_MD of UEs may miss it
};

struct Problem {
    ScenarioConfig scenario;
    ProblemKind kind = ProblemKind::P1;
};

/// P1 when no misdetection is allowed, P2 otherwise.
inline Problem make_problem(const ScenarioConfig& c)
{
    return {c, c.misdetection_prob > 0.0 ? ProblemKind::P2 : ProblemKind::P1};
}

inline void validate(const Problem& p)
{
    validate(p.scenario);
    if (p.kind == ProblemKind::P1 && p.scenario.misdetection_prob != 0.0) {
        throw ConfigError("misdetection_prob", "must be 0 for a P1 problem");
    }
}

/// Number of UEs that must reach the threshold: ceil((1 - P_MD) K), at
/// least one. The small slack keeps (1 - 0.1) * 200 at 180 rather than 181.
inline int required_count(int num_ues, double misdetection_prob)
{
    const double x = (1.0 - misdetection_prob) * num_ues;
    const auto need = static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, x)));
    return std::clamp(need, 1, num_ues);
}

/// Array-size candidate with everything that does not depend on the UEs.
struct Candidate {
    int n_gnb = 1;
    double delta_rad = 2.0;
    int sectors = 4;
    BurstTiming timing;
};

inline Candidate make_candidate(const ScenarioConfig& c, int n_gnb)
{
    Candidate k;
    k.n_gnb = n_gnb;
    k.delta_rad = half_power_beamwidth(n_gnb);
    k.sectors = sector_count(n_gnb);
    k.timing = burst_timing(n_gnb, c.n_ss, c.t_ss_s, c.numerology);
    return k;
}

inline std::vector<Candidate> candidate_table(const ScenarioConfig& c)
{
    std::vector<Candidate> out;
    out.reserve(kMaxAntennas);
    for (int n = c.min_antennas; n <= kMaxAntennas; ++n) {
        out.push_back(make_candidate(c, n));
    }
    return out;
}

/// Fading pair used for UE `ue` at candidate `n_gnb`.
inline std::pair<double, double> fading_for(const ScenarioConfig& c, std::uint64_t iteration, std::uint32_t ue,
                                            const UeSample& sample, int n_gnb)
{
    if (c.fading_mode == FadingMode::PerIteration) {
        return {sample.fading_los, sample.fading_nlos};
    }
    RandomStream s(c.master_seed, fading_stream(iteration, ue, static_cast<std::uint32_t>(n_gnb)));
    const double l = s.exponential();
    const double n = s.exponential();
    return {l, n};
}

struct IterationDraw {
    std::vector<UeSample> ues;
    std::vector<LinkCoefficients> links;
};

inline IterationDraw draw_iteration(const ScenarioConfig& c, std::uint64_t iteration)
{
    IterationDraw d;
    d.ues.reserve(c.num_ues);
    d.links.reserve(c.num_ues);
    for (int k = 0; k < c.num_ues; ++k) {
        d.ues.push_back(sample_ue(c, iteration, static_cast<std::uint32_t>(k)));
        d.links.push_back(link_coefficients(d.ues.back(), c));
    }
    return d;
}

/// Total offset of one UE under candidate k.
inline double ue_offset(const ScenarioConfig& c, const Candidate& k, const UeSample& ue)
{
    const BeamAssignment a = nearest_boresight(ue.phi_rad, k.delta_rad, k.sectors);
    return total_offset(a.offset_rad, mobility_offset(ue.dist2d_m, c.ue_speed_mps, k.timing));
}

/// gamma_k (1/W) of every UE of an iteration under candidate k.
inline std::vector<double> candidate_gammas(const ScenarioConfig& c, const Candidate& k, std::uint64_t iteration,
                                            const IterationDraw& d)
{
    std::vector<double> g(d.ues.size());
    for (std::size_t i = 0; i < d.ues.size(); ++i) {
        const auto [fl, fn] = fading_for(c, iteration, static_cast<std::uint32_t>(i), d.ues[i], k.n_gnb);
        g[i] = d.links[i].gamma(array_gain(k.n_gnb, ue_offset(c, k, d.ues[i])), fl, fn);
    }
    return g;
}

struct IterationOutcome {
    int n_star = 0;
    double p_t_star_w = 0.0;
    EnergyReport energy;
};

namespace detail {

struct SolveContext {
    std::vector<Candidate> candidates;
    int need = 1;
    double gamma_min = 0.0;  ///< tau / P_T
    double tau = 0.0;
};

inline SolveContext make_context(const Problem& p)
{
    const ScenarioConfig& c = p.scenario;
    SolveContext ctx;
    ctx.candidates = candidate_table(c);
    const double pmd = p.kind == ProblemKind::P1 ? 0.0 : c.misdetection_prob;
    ctx.need = required_count(c.num_ues, pmd);
    ctx.tau = db_to_linear(c.snr_threshold_db);
    ctx.gamma_min = ctx.tau / dbm_to_watt(c.max_tx_power_dbm);
    return ctx;
}

inline std::optional<IterationOutcome> solve_iteration(const Problem& p, const SolveContext& ctx,
                                                       std::uint64_t iteration, std::vector<double>& gammas)
{
    const ScenarioConfig& c = p.scenario;
    const IterationDraw d = draw_iteration(c, iteration);
    const int num_ues = c.num_ues;
    const int allowed_misses = num_ues - ctx.need;
    gammas.resize(num_ues);

    for (const Candidate& k : ctx.candidates) {
        int misses = 0;
        for (int i = 0; i < num_ues && misses <= allowed_misses; ++i) {
            const auto [fl, fn] = fading_for(c, iteration, static_cast<std::uint32_t>(i), d.ues[i], k.n_gnb);
            gammas[i] = d.links[i].gamma(array_gain(k.n_gnb, ue_offset(c, k, d.ues[i])), fl, fn);
            if (!(gammas[i] >= ctx.gamma_min)) {
                ++misses;
            }
        }
        if (misses > allowed_misses) {
            continue;
        }
        // need-th largest gamma sets the power that serves exactly `need` UEs.
        auto nth = gammas.begin() + (ctx.need - 1);
        std::nth_element(gammas.begin(), nth, gammas.end(), std::greater<>());
        IterationOutcome out;
        out.n_star = k.n_gnb;
        out.p_t_star_w = ctx.tau / *nth;
        out.energy = sweep_energy(k.n_gnb, out.p_t_star_w, k.timing, c.power);
        return out;
    }
    return std::nullopt;
}

}  // namespace detail

/// One Monte Carlo iteration; empty when no N <= 64 meets the constraint.
inline std::optional<IterationOutcome> solve_iteration(const Problem& p, std::uint64_t iteration)
{
    const detail::SolveContext ctx = detail::make_context(p);
    std::vector<double> scratch;
    return detail::solve_iteration(p, ctx, iteration, scratch);
}

struct SolveOptions {
    int workers = 1;
    /// Stop once the infeasible count alone rules out feasibility. Averages
    /// are then NaN and `truncated` is set.
    bool stop_when_infeasible = false;
    std::size_t chunk_size = 256;
    /// Chunks per early-stop check.
    std::size_t wave_chunks = 4;
};

struct SolveResult {
    double n_star = std::numeric_limits<double>::quiet_NaN();
    double p_t_star_w = std::numeric_limits<double>::quiet_NaN();
    double p_t_star_dbm = std::numeric_limits<double>::quiet_NaN();
    /// Means of per-iteration sweep energy and beam-management power.
    double e_c_j_mean = std::numeric_limits<double>::quiet_NaN();
    double p_c_w_mean = std::numeric_limits<double>::quiet_NaN();
    /// Energy and power evaluated at the averaged operating point.
    double e_c_j_at_mean = std::numeric_limits<double>::quiet_NaN();
    double p_c_w_at_mean = std::numeric_limits<double>::quiet_NaN();
    double feasible_fraction = 0.0;
    bool feasible = false;
    std::int64_t iterations_used = 0;
    std::int64_t infeasible_iterations = 0;
    bool truncated = false;
};

/// Energy at a real-valued operating point; the sector count of the
/// averaged array size drives both S_D and the burst timing.
inline EnergyReport energy_at(double n_gnb, double p_t_w, const ScenarioConfig& c)
{
    const int sectors = sector_count_real(n_gnb);
    const BurstTiming t = burst_timing_for_sectors(sectors, c.n_ss, c.t_ss_s, c.numerology);
    EnergyReport r;
    r.p_gnb_w = gnb_power(n_gnb, p_t_w, c.power);
    r.e_c_j = sectors * r.p_gnb_w * t.t_ssb_s;
    r.p_c_w = r.p_gnb_w * t.t_ssb_s * t.n_ss / t.t_ss_s;
    return r;
}

inline SolveResult solve(const Problem& p, const SolveOptions& opt = {})
{
    validate(p);
    const ScenarioConfig& c = p.scenario;
    const detail::SolveContext ctx = detail::make_context(p);
    const auto total = static_cast<std::size_t>(c.mc_iterations);
    const std::size_t chunk = std::max<std::size_t>(opt.chunk_size, 1);
    const std::size_t n_chunks = (total + chunk - 1) / chunk;
    const double max_infeasible = c.eps_feas * static_cast<double>(total);

    struct Partial {
        std::int64_t feasible = 0;
        std::int64_t infeasible = 0;
        double sum_n = 0.0;
        double sum_pt = 0.0;
        double sum_ec = 0.0;
        double sum_pc = 0.0;
    };
    std::vector<Partial> partials(n_chunks);

    // Waves have a fixed size in chunks so the early-stop point does not
    // depend on the worker count.
    const std::size_t wave = opt.stop_when_infeasible ? std::max<std::size_t>(opt.wave_chunks, 1) : n_chunks;
    std::size_t done_chunks = 0;
    std::int64_t infeasible = 0;
    SolveResult r;
    while (done_chunks < n_chunks) {
        const std::size_t wave_chunks = std::min(wave, n_chunks - done_chunks);
        const std::size_t base = done_chunks;
        for_each_chunk(wave_chunks, 1, opt.workers, [&](std::size_t w, std::size_t, std::size_t) {
            const std::size_t ci = base + w;
            Partial& part = partials[ci];
            std::vector<double> scratch;
            const std::size_t end = std::min(total, (ci + 1) * chunk);
            for (std::size_t it = ci * chunk; it < end; ++it) {
                const auto o = detail::solve_iteration(p, ctx, it, scratch);
                if (!o) {
                    ++part.infeasible;
                    continue;
                }
                ++part.feasible;
                part.sum_n += o->n_star;
                part.sum_pt += o->p_t_star_w;
                part.sum_ec += o->energy.e_c_j;
                part.sum_pc += o->energy.p_c_w;
            }
        });
        for (std::size_t ci = base; ci < base + wave_chunks; ++ci) {
            infeasible += partials[ci].infeasible;
        }
        done_chunks += wave_chunks;
        if (opt.stop_when_infeasible && static_cast<double>(infeasible) > max_infeasible && done_chunks < n_chunks) {
            r.truncated = true;
            break;
        }
    }

    Partial sum;
    for (std::size_t ci = 0; ci < done_chunks; ++ci) {
        sum.feasible += partials[ci].feasible;
        sum.infeasible += partials[ci].infeasible;
        sum.sum_n += partials[ci].sum_n;
        sum.sum_pt += partials[ci].sum_pt;
        sum.sum_ec += partials[ci].sum_ec;
        sum.sum_pc += partials[ci].sum_pc;
    }
    r.iterations_used = sum.feasible + sum.infeasible;
    r.infeasible_iterations = sum.infeasible;
    if (r.truncated) {
        // Lower bound on the infeasible share; the rest was never run.
        r.feasible_fraction = 1.0 - static_cast<double>(sum.infeasible) / static_cast<double>(total);
        r.feasible = false;
        return r;
    }
    r.feasible_fraction = static_cast<double>(sum.feasible) / static_cast<double>(total);
    r.feasible = static_cast<double>(sum.infeasible) <= max_infeasible;
    if (sum.feasible > 0) {
        const auto nf = static_cast<double>(sum.feasible);
        r.n_star = sum.sum_n / nf;
        r.p_t_star_w = sum.sum_pt / nf;
        r.p_t_star_dbm = watt_to_dbm(r.p_t_star_w);
        r.e_c_j_mean = sum.sum_ec / nf;
        r.p_c_w_mean = sum.sum_pc / nf;
        const EnergyReport at = energy_at(r.n_star, r.p_t_star_w, c);
        r.e_c_j_at_mean = at.e_c_j;
        r.p_c_w_at_mean = at.p_c_w;
    }
    return r;
}

}  // namespace beamopt
