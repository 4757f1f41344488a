// End-to-end runs: schedule generation, energy maps, threshold calibration,
// metrics, optimizer sweeps and artifact writing. This is what the CLI
// subcommands call.
#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "fanscan/config.hpp"
#include "fanscan/io.hpp"
#include "fanscan/version.hpp"

namespace fanscan {

struct CliOverrides {
    std::optional<double> alpha;
    std::optional<double> dphi0_deg;
    std::optional<double> grid_res;
    std::optional<std::string> out_dir;

    void apply(RunConfig& cfg) const {
        if (alpha) cfg.alpha = *alpha;
        if (dphi0_deg) cfg.dphi0_deg = *dphi0_deg;
        if (grid_res) cfg.grid_resolution = *grid_res;
        if (out_dir) cfg.output_dir = *out_dir;
        if (cfg.alpha < 1.0) throw ConfigError("--alpha: must be >= 1");
        if (cfg.dphi0_deg <= 0.0) throw ConfigError("--dphi0: must be > 0");
        if (cfg.grid_resolution <= 0.0) throw ConfigError("--grid-res: must be > 0");
    }

    json to_json() const {
        json j = json::object();
        if (alpha) j["alpha"] = *alpha;
        if (dphi0_deg) j["dphi0_deg"] = *dphi0_deg;
        if (grid_res) j["grid_res"] = *grid_res;
        if (out_dir) j["out"] = *out_dir;
        return j;
    }
};

struct CalibratedThresholds {
    Thresholds values;
    bool calibrated{false};
    double achieved_hole_alpha1{0.0};  // hole ratio of the alpha = 1 baseline at pos
};

// Thresholds for a run. Calibration always anchors at the uniform (alpha = 1)
// baseline schedule so that runs with different alpha stay comparable: the
// positioning threshold is the energy quantile that puts the requested hole
// ratio on the baseline map, and the communication thresholds are fixed
// quantiles of the same best-energy distribution.
inline CalibratedThresholds resolve_thresholds(const RunConfig& cfg,
                                               const EnergyMap& baseline_l,
                                               const EnergyMap& map_t) {
    CalibratedThresholds out;
    if (!cfg.thresholds.calibrate) {
        out.values = cfg.thresholds.explicit_values;
        out.calibrated = false;
        return out;
    }
    Thresholds t;
    t.pos = threshold_for_hole_ratio(baseline_l, map_t, cfg.thresholds.target_hole_ratio);
    if (t.pos <= 0.0)
        throw std::runtime_error(
            "threshold calibration failed: target hole ratio below the dark-cell fraction");
    t.sen = t.pos;
    t.com_low = std::max(t.pos, energy_quantile(baseline_l, map_t,
                                                cfg.thresholds.com_quantile_low));
    t.com_high = std::max(t.com_low, energy_quantile(baseline_l, map_t,
                                                     cfg.thresholds.com_quantile_high));
    t.validate();
    out.values = t;
    out.calibrated = true;
    out.achieved_hole_alpha1 = classify_areas(baseline_l, map_t, t).hole_ratio;
    return out;
}

struct CoverageRun {
    RunConfig cfg;
    RoadGrid grid;
    ScanSchedule sched_l;
    ScanSchedule sched_t;
    EnergyMap map_l;
    EnergyMap map_t;
    CalibratedThresholds thresholds;
    AreaClassification classification;
    double timing_s{0.0};
};

inline CoverageRun run_coverage(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    CoverageRun run;
    run.cfg = cfg;
    const RoadTopology topo = cfg.topo();
    const MRRConfig mrr = cfg.mrr();
    run.grid = RoadGrid::over_road(topo, cfg.grid_resolution);

    const BeamParams beam_l = cfg.beam_l();
    const BeamParams beam_t = cfg.beam_t();
    const SchedulePlan plan = cfg.plan();

    run.sched_t = build_transverse_schedule(topo, beam_t, plan);
    run.map_t = accumulate_energy_map(run.sched_t, run.grid, topo, beam_t, mrr, cfg.workers);

    run.sched_l = build_longitudinal_schedule(topo, beam_l, plan);
    run.map_l = accumulate_energy_map(run.sched_l, run.grid, topo, beam_l, mrr, cfg.workers);

    if (cfg.alpha == 1.0 || !cfg.thresholds.calibrate) {
        run.thresholds = resolve_thresholds(cfg, run.map_l, run.map_t);
    } else {
        // calibration anchors at the uniform baseline schedule
        SchedulePlan base_plan = plan;
        base_plan.azimuth.alpha = 1.0;
        const ScanSchedule base_sched = build_longitudinal_schedule(topo, beam_l, base_plan);
        const EnergyMap base_map =
            accumulate_energy_map(base_sched, run.grid, topo, beam_l, mrr, cfg.workers);
        run.thresholds = resolve_thresholds(cfg, base_map, run.map_t);
    }

    run.classification = classify_areas(run.map_l, run.map_t, run.thresholds.values);
    run.timing_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

inline json thresholds_to_json(const CalibratedThresholds& t, const RunConfig& cfg) {
    json j;
    j["pos_j"] = t.values.pos;
    j["sen_j"] = t.values.sen;
    j["com_low_j"] = t.values.com_low;
    j["com_high_j"] = t.values.com_high;
    j["calibrated"] = t.calibrated;
    if (t.calibrated) {
        j["target_hole_ratio"] = cfg.thresholds.target_hole_ratio;
        j["hole_ratio_alpha1"] = t.achieved_hole_alpha1;
    }
    return j;
}

inline json metrics_to_json(const EnergyMap& map_l, const EnergyMap& map_t,
                            const AreaClassification& cls, const Thresholds& thr) {
    json m;
    m["hole_ratio"] = cls.hole_ratio;
    m["class_fractions"] = {cls.fractions[0], cls.fractions[1], cls.fractions[2],
                            cls.fractions[3]};
    json levels;
    const std::pair<const char*, double> named[] = {{"pos", thr.pos},
                                                    {"sen", thr.sen},
                                                    {"com_low", thr.com_low},
                                                    {"com_high", thr.com_high}};
    for (const auto& [name, value] : named) {
        const LevelMetrics lm = level_metrics(map_l, map_t, value);
        levels[name] = {{"eff_l", lm.eff_l},
                        {"eff_t", lm.eff_t},
                        {"and", lm.both},
                        {"or", lm.either}};
    }
    m["levels"] = levels;
    return m;
}

inline json coverage_report(const CoverageRun& run, const json& cli_overrides) {
    json r;
    r["version"] = kVersion;
    r["mode"] = "coverage";
    r["config"] = config_to_json(run.cfg);
    r["cli_overrides"] = cli_overrides;
    r["grid"] = {{"nx", run.grid.nx},
                 {"ny", run.grid.ny},
                 {"dx_m", run.grid.dx},
                 {"dy_m", run.grid.dy}};
    r["schedule"] = {{"k_l", run.sched_l.states.size()}, {"k_t", run.sched_t.states.size()}};
    r["thresholds"] = thresholds_to_json(run.thresholds, run.cfg);
    r["metrics"] = metrics_to_json(run.map_l, run.map_t, run.classification,
                                   run.thresholds.values);
    r["timing_s"] = run.timing_s;
    return r;
}

inline void write_coverage_outputs(const CoverageRun& run, const json& report,
                                   const std::filesystem::path& outdir) {
    write_energy_map_csv(run.map_l, outdir / "energy_map_L.csv");
    write_energy_map_csv(run.map_t, outdir / "energy_map_T.csv");
    write_classes_pgm(run.classification, outdir / "area_classes.pgm");
    std::ofstream out = open_for_write(outdir / "report.json");
    out << report.dump(2) << '\n';
    if (!out) throw IoError("failed writing report.json");
}

struct OptimizeRun {
    CoverageRun baseline;
    SearchResult result;
    double timing_s{0.0};
};

inline OptimizeRun run_optimize(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!cfg.optimizer) throw ConfigError("optimizer: section missing from config");

    OptimizeRun run;
    RunConfig base_cfg = cfg;
    base_cfg.alpha = 1.0;  // calibration anchor; candidates supply their own alpha
    run.baseline = run_coverage(base_cfg);

    SearchSpace space;
    space.dphi0_values = cfg.optimizer->dphi0_rad();
    space.alpha_values = cfg.optimizer->alpha_values;
    space.div_max_values = cfg.optimizer->div_max_rad();
    space.objective = cfg.optimizer->objective;
    space.level = cfg.optimizer->level;
    space.validate();

    EvalContext ctx;
    ctx.topo = cfg.topo();
    ctx.beam_l = cfg.beam_l();
    ctx.beam_t = cfg.beam_t();
    ctx.mrr = cfg.mrr();
    ctx.grid = run.baseline.grid;
    ctx.plan = cfg.plan();
    ctx.thresholds = run.baseline.thresholds.values;
    ctx.map_t = run.baseline.map_t;
    ctx.level = space.level;
    ctx.workers = cfg.workers;

    run.result = grid_search(space, ctx);
    run.timing_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

inline json optimize_report(const OptimizeRun& run, const json& cli_overrides) {
    json r;
    r["version"] = kVersion;
    r["mode"] = "optimize";
    r["config"] = config_to_json(run.baseline.cfg);
    r["cli_overrides"] = cli_overrides;
    r["thresholds"] = thresholds_to_json(run.baseline.thresholds, run.baseline.cfg);
    auto row_json = [](const CandidateRow& row) {
        json j;
        j["dphi0_deg"] = rad_to_deg(row.dphi0);
        j["alpha"] = row.alpha;
        if (row.div_max) j["div_line_max_deg"] = rad_to_deg(*row.div_max);
        j["k_states"] = row.k_states;
        j["feasible"] = row.feasible;
        j["hole_ratio"] = row.hole_ratio;
        j["eff_l"] = row.eff_l;
        j["and"] = row.both;
        j["or"] = row.either;
        return j;
    };
    r["best"] = row_json(run.result.best);
    json rows = json::array();
    for (const auto& row : run.result.rows) rows.push_back(row_json(row));
    r["candidates"] = rows;
    r["timing_s"] = run.timing_s;
    return r;
}

inline void write_optimize_outputs(const OptimizeRun& run, const json& report,
                                   const std::filesystem::path& outdir) {
    write_optimizer_csv(run.result, outdir / "optimizer_results.csv");
    std::ofstream out = open_for_write(outdir / "report.json");
    out << report.dump(2) << '\n';
    if (!out) throw IoError("failed writing report.json");
}

// Normalized line-axis cuts for the configured longitudinal beam at 10 m,
// shape orders 1..12. The cut runs along the axis whose divergence is the
// thickness value so the order sweep shows the flattening directly.
inline void run_profile(const RunConfig& cfg, const std::filesystem::path& outdir) {
    const std::vector<int> orders = {1, 2, 4, 8, 12};
    const double z = 10.0;
    std::vector<std::vector<ProfileSample>> cuts;
    cuts.reserve(orders.size());
    for (int n : orders)
        cuts.push_back(profile_flatness(n, deg_to_rad(cfg.fan_l.div_thick_deg),
                                        deg_to_rad(cfg.fan_l.div_line_max_deg), z));
    write_profile_csv(orders, cuts, outdir / "profile.csv");
}

}  // namespace fanscan
