// Exhaustive search over the azimuthal scheduling parameters (dphi0, alpha),
// optionally co-tuning the line-divergence limit.
#pragma once

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fanscan/coverage.hpp"

namespace fanscan {

enum class Objective { MinimizeHoleRatio, MaximizeEffectiveCoverage };
enum class ThresholdLevel { Pos, Sen, ComLow, ComHigh };

inline const char* threshold_level_name(ThresholdLevel l) {
    switch (l) {
        case ThresholdLevel::Pos: return "pos";
        case ThresholdLevel::Sen: return "sen";
        case ThresholdLevel::ComLow: return "com_low";
        default: return "com_high";
    }
}

inline double threshold_value(const Thresholds& t, ThresholdLevel l) {
    switch (l) {
        case ThresholdLevel::Pos: return t.pos;
        case ThresholdLevel::Sen: return t.sen;
        case ThresholdLevel::ComLow: return t.com_low;
        default: return t.com_high;
    }
}

struct SearchSpace {
    std::vector<double> dphi0_values;              // rad
    std::vector<double> alpha_values;
    std::vector<double> div_max_values;            // rad, optional (empty = keep beam limit)
    Objective objective{Objective::MinimizeHoleRatio};
    ThresholdLevel level{ThresholdLevel::Pos};

    void validate() const {
        if (dphi0_values.empty() || alpha_values.empty())
            throw std::runtime_error("no feasible candidate: empty search space");
    }
};

// Everything a candidate evaluation needs besides its own parameters. The
// transverse map does not depend on the azimuth grid, so it is computed once
// and shared.
struct EvalContext {
    RoadTopology topo;
    BeamParams beam_l;
    BeamParams beam_t;
    MRRConfig mrr;
    RoadGrid grid;
    SchedulePlan plan;
    Thresholds thresholds;
    EnergyMap map_t;
    ThresholdLevel level{ThresholdLevel::Pos};
    unsigned workers{0};
};

struct CandidateRow {
    double dphi0{0.0};  // rad
    double alpha{1.0};
    std::optional<double> div_max;  // rad
    bool feasible{true};
    int k_states{0};     // grid size 2M + 1
    double hole_ratio{1.0};
    double eff_l{0.0};
    double both{0.0};
    double either{0.0};
    double objective_value{0.0};
    double runtime_s{0.0};
};

struct SearchResult {
    std::vector<CandidateRow> rows;  // sorted by objective, best first
    CandidateRow best;
};

inline CandidateRow evaluate_candidate(double dphi0, double alpha,
                                       std::optional<double> div_max, const EvalContext& ctx) {
    CandidateRow row;
    row.dphi0 = dphi0;
    row.alpha = alpha;
    row.div_max = div_max;
    const auto t0 = std::chrono::steady_clock::now();

    AzimuthGridParams ap;
    ap.dphi0 = dphi0;
    ap.alpha = alpha;
    ap.phi_max = ctx.plan.azimuth.phi_max;
    ap.validate();
    const long long m = azimuth_node_count(ap);
    const long long k = 2 * m + 1;
    row.k_states = static_cast<int>(std::min<long long>(k, INT_MAX));
    if (k > static_cast<long long>(ctx.plan.max_states)) {
        row.feasible = false;
        row.hole_ratio = 1.0;
        return row;
    }

    SchedulePlan plan = ctx.plan;
    plan.azimuth = ap;
    BeamParams beam = ctx.beam_l;
    if (div_max) beam.div_x_max = *div_max;
    const ScanSchedule sched = build_longitudinal_schedule(ctx.topo, beam, plan);
    const EnergyMap map_l =
        accumulate_energy_map(sched, ctx.grid, ctx.topo, beam, ctx.mrr, ctx.workers);

    const AreaClassification cls = classify_areas(map_l, ctx.map_t, ctx.thresholds);
    row.hole_ratio = cls.hole_ratio;
    const LevelMetrics lm =
        level_metrics(map_l, ctx.map_t, threshold_value(ctx.thresholds, ctx.level));
    row.eff_l = lm.eff_l;
    row.both = lm.both;
    row.either = lm.either;
    row.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

inline SearchResult grid_search(const SearchSpace& space, const EvalContext& ctx) {
    space.validate();
    std::vector<CandidateRow> rows;
    const bool has_div = !space.div_max_values.empty();
    rows.reserve(space.dphi0_values.size() * space.alpha_values.size() *
                 (has_div ? space.div_max_values.size() : 1));

    EvalContext local = ctx;
    local.level = space.level;

    for (double dphi0 : space.dphi0_values)
        for (double alpha : space.alpha_values) {
            if (has_div) {
                for (double dm : space.div_max_values)
                    rows.push_back(evaluate_candidate(dphi0, alpha, dm, local));
            } else {
                rows.push_back(evaluate_candidate(dphi0, alpha, std::nullopt, local));
            }
        }

    for (auto& r : rows) {
        r.objective_value =
            space.objective == Objective::MinimizeHoleRatio ? r.hole_ratio : r.eff_l;
    }

    const bool minimize = space.objective == Objective::MinimizeHoleRatio;
    auto better = [&](const CandidateRow& a, const CandidateRow& b) {
        if (a.feasible != b.feasible) return a.feasible;
        if (a.objective_value != b.objective_value)
            return minimize ? a.objective_value < b.objective_value
                            : a.objective_value > b.objective_value;
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        if (a.dphi0 != b.dphi0) return a.dphi0 < b.dphi0;
        return a.div_max.value_or(0.0) < b.div_max.value_or(0.0);
    };
    std::stable_sort(rows.begin(), rows.end(), better);

    SearchResult result;
    result.rows = std::move(rows);
    if (result.rows.empty() || !result.rows.front().feasible)
        throw std::runtime_error("grid_search(): no feasible candidate");
    result.best = result.rows.front();
    return result;
}

}  // namespace fanscan
