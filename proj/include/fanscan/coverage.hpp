// Discretized evaluation plane, per-cell energy accumulation over a scan
// cycle, and the coverage metrics / area classification derived from it.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fanscan/link_budget.hpp"
#include "fanscan/scan_plan.hpp"

namespace fanscan {

// Cell-centered grid over the road rectangle at the evaluation height.
struct RoadGrid {
    std::size_t nx{0}, ny{0};
    double dx{0.0}, dy{0.0};
    double x0{0.0}, y0{0.0};  // lower corner of the rectangle
    double z_eval{0.0};

    std::size_t cell_count() const { return nx * ny; }
    double cell_x(std::size_t ix) const { return x0 + (ix + 0.5) * dx; }
    double cell_y(std::size_t iy) const { return y0 + (iy + 0.5) * dy; }
    Vec3 cell_center(std::size_t ix, std::size_t iy) const {
        return {cell_x(ix), cell_y(iy), z_eval};
    }

    bool same_shape(const RoadGrid& o) const {
        return nx == o.nx && ny == o.ny && dx == o.dx && dy == o.dy && x0 == o.x0 &&
               y0 == o.y0 && z_eval == o.z_eval;
    }

    // Road spans [tx_x, tx_x + length] along x and is centered laterally.
    static RoadGrid over_road(const RoadTopology& topo, double resolution) {
        if (resolution <= 0.0) throw std::domain_error("RoadGrid: resolution must be > 0");
        RoadGrid g;
        g.nx = static_cast<std::size_t>(std::lround(topo.length / resolution));
        g.ny = static_cast<std::size_t>(std::lround(topo.width / resolution));
        if (g.nx == 0 || g.ny == 0) throw std::domain_error("RoadGrid: empty grid");
        g.dx = topo.length / static_cast<double>(g.nx);
        g.dy = topo.width / static_cast<double>(g.ny);
        g.x0 = topo.tx_xy.first;
        g.y0 = topo.tx_xy.second - topo.width / 2.0;
        g.z_eval = topo.mrr_height;
        return g;
    }
};

// Per-cell maximum single-state received energy over one scan cycle, row
// major with y as the row index.
struct EnergyMap {
    Fan fan{Fan::Longitudinal};
    RoadGrid grid;
    std::vector<double> values;  // [iy * nx + ix], joules

    double at(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx + ix]; }
};

struct Thresholds {
    double pos{0.0};       // J, positioning
    double sen{0.0};       // J, sensing (carried in reports, no distinct class)
    double com_low{0.0};   // J, low-rate communication
    double com_high{0.0};  // J, high-rate communication

    void validate() const {
        if (!(pos > 0.0 && pos <= com_low && com_low <= com_high))
            throw std::domain_error("Thresholds: need 0 < pos <= com_low <= com_high");
        if (sen <= 0.0) throw std::domain_error("Thresholds: sen must be > 0");
    }
};

// Received energy deposited at a cell by one quasi-static state.
inline double state_energy(const ScanState& state, const BeamParams& base_beam,
                           const Vec3& tx_origin, const Vec3& cell, const MRRConfig& mrr) {
    const BeamParams beam = base_beam.with_divergences(state.div_line, state.div_thick);
    const BeamFrame frame = beam_frame(state.theta, state.phi, state.fan);
    const Vec3 r = cell - tx_origin;
    if (dot(r, frame.d) <= 0.0) return 0.0;  // cell behind the beam plane
    const LinkSample link = detail::evaluate_link_at_range(beam, frame, tx_origin, cell,
                                                           norm(r), mrr);
    return link.received_power * state.dwell;
}

namespace detail {

struct PreparedState {
    BeamParams beam;
    BeamFrame frame;
    double dwell{0.0};
};

inline std::vector<PreparedState> prepare_states(const ScanSchedule& schedule,
                                                 const BeamParams& base_beam) {
    std::vector<PreparedState> out;
    out.reserve(schedule.states.size());
    for (const auto& s : schedule.states) {
        PreparedState ps;
        ps.beam = base_beam.with_divergences(s.div_line, s.div_thick);
        ps.frame = beam_frame(s.theta, s.phi, s.fan);
        ps.dwell = s.dwell;
        out.push_back(ps);
    }
    return out;
}

// Max-over-states energy for one cell. Identical arithmetic to state_energy
// so brute-force recomputation reproduces the map bit for bit.
inline double cell_max_energy(const std::vector<PreparedState>& states, const Vec3& tx_origin,
                              const Vec3& cell, const MRRConfig& mrr) {
    const Vec3 r = cell - tx_origin;
    const double range = norm(r);
    double best = 0.0;
    for (const auto& ps : states) {
        if (dot(r, ps.frame.d) <= 0.0) continue;
        const LinkSample link =
            evaluate_link_at_range(ps.beam, ps.frame, tx_origin, cell, range, mrr);
        best = std::max(best, link.received_power * ps.dwell);
    }
    return best;
}

}  // namespace detail

// Energy map over the grid: per cell the maximum single-state energy during
// the cycle ("exceed the threshold at least once" semantics). Cells are
// independent, so the result is identical for any worker count and any state
// order; max-reduction makes it exactly order-insensitive.
inline EnergyMap accumulate_energy_map(const ScanSchedule& schedule, const RoadGrid& grid,
                                       const RoadTopology& topo, const BeamParams& base_beam,
                                       const MRRConfig& mrr, unsigned workers = 0) {
    EnergyMap map;
    map.fan = schedule.states.empty() ? Fan::Longitudinal : schedule.states.front().fan;
    map.grid = grid;
    map.values.assign(grid.cell_count(), 0.0);
    const auto states = detail::prepare_states(schedule, base_beam);
    if (states.empty()) return map;
    const Vec3 tx = topo.tx_origin();

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.ny));

    auto run_rows = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t iy = row_begin; iy < row_end; ++iy) {
            double* row = map.values.data() + iy * grid.nx;
            for (std::size_t ix = 0; ix < grid.nx; ++ix) {
                row[ix] = detail::cell_max_energy(states, tx, grid.cell_center(ix, iy), mrr);
            }
        }
    };

    if (workers <= 1) {
        run_rows(0, grid.ny);
        return map;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (grid.ny + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = std::min<std::size_t>(w * chunk, grid.ny);
        const std::size_t e = std::min<std::size_t>(b + chunk, grid.ny);
        if (b < e) pool.emplace_back(run_rows, b, e);
    }
    for (auto& t : pool) t.join();
    return map;
}

// Fraction of cells a single state pushes over the threshold.
inline double coverage_ratio_instant(const ScanState& state, const RoadGrid& grid,
                                     const RoadTopology& topo, const BeamParams& base_beam,
                                     const MRRConfig& mrr, double threshold) {
    if (threshold <= 0.0) throw std::domain_error("coverage_ratio_instant(): threshold must be > 0");
    const Vec3 tx = topo.tx_origin();
    std::size_t covered = 0;
    for (std::size_t iy = 0; iy < grid.ny; ++iy)
        for (std::size_t ix = 0; ix < grid.nx; ++ix)
            if (state_energy(state, base_beam, tx, grid.cell_center(ix, iy), mrr) >= threshold)
                ++covered;
    return static_cast<double>(covered) / static_cast<double>(grid.cell_count());
}

// Union coverage over the whole cycle: per-cell max >= threshold iff some
// state reached it.
inline double effective_coverage(const EnergyMap& map, double threshold) {
    std::size_t covered = 0;
    for (double v : map.values)
        if (v >= threshold) ++covered;
    return static_cast<double>(covered) / static_cast<double>(map.values.size());
}

enum class CompositeMode { And, Or };

inline double composite_coverage(const EnergyMap& map_l, const EnergyMap& map_t,
                                 double threshold, CompositeMode mode) {
    if (!map_l.grid.same_shape(map_t.grid))
        throw std::invalid_argument("composite_coverage(): grid mismatch");
    std::size_t covered = 0;
    for (std::size_t i = 0; i < map_l.values.size(); ++i) {
        const bool a = map_l.values[i] >= threshold;
        const bool b = map_t.values[i] >= threshold;
        if (mode == CompositeMode::And ? (a && b) : (a || b)) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(map_l.values.size());
}

// Area classes of the best-energy map E* = max(E_L, E_T):
//   1: E* <  pos           (coverage hole)
//   2: pos <= E* < com_low  (positioning only)
//   3: com_low <= E* < com_high
//   4: E* >= com_high
struct AreaClassification {
    RoadGrid grid;
    std::vector<std::uint8_t> classes;    // [iy * nx + ix], values 1..4
    std::array<double, 4> fractions{};    // index 0 -> class 1
    double hole_ratio{0.0};
};

inline AreaClassification classify_areas(const EnergyMap& map_l, const EnergyMap& map_t,
                                         const Thresholds& thr) {
    if (!map_l.grid.same_shape(map_t.grid))
        throw std::invalid_argument("classify_areas(): grid mismatch");
    thr.validate();
    AreaClassification out;
    out.grid = map_l.grid;
    out.classes.resize(map_l.values.size());
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < map_l.values.size(); ++i) {
        const double e = std::max(map_l.values[i], map_t.values[i]);
        std::uint8_t c;
        if (e < thr.pos) c = 1;
        else if (e < thr.com_low) c = 2;
        else if (e < thr.com_high) c = 3;
        else c = 4;
        out.classes[i] = c;
        ++counts[static_cast<std::size_t>(c - 1)];
    }
    const double n = static_cast<double>(map_l.values.size());
    for (std::size_t k = 0; k < 4; ++k) out.fractions[k] = static_cast<double>(counts[k]) / n;
    out.hole_ratio = out.fractions[0];
    return out;
}

// Smallest map value v such that the fraction of cells strictly below v
// equals target as closely as the discrete distribution allows. Used to pin
// the positioning threshold from a prescribed hole ratio.
inline double threshold_for_hole_ratio(const EnergyMap& map_l, const EnergyMap& map_t,
                                       double target_hole_ratio) {
    if (!map_l.grid.same_shape(map_t.grid))
        throw std::invalid_argument("threshold_for_hole_ratio(): grid mismatch");
    if (!(target_hole_ratio > 0.0 && target_hole_ratio < 1.0))
        throw std::domain_error("threshold_for_hole_ratio(): target must be in (0, 1)");
    std::vector<double> best(map_l.values.size());
    for (std::size_t i = 0; i < best.size(); ++i)
        best[i] = std::max(map_l.values[i], map_t.values[i]);
    std::sort(best.begin(), best.end());
    const std::size_t k = static_cast<std::size_t>(
        std::lround(target_hole_ratio * static_cast<double>(best.size())));
    const std::size_t idx = std::min(k, best.size() - 1);
    return best[idx];
}

// Quantile of the best-energy distribution; used to derive the
// communication-band thresholds from the calibrated map.
inline double energy_quantile(const EnergyMap& map_l, const EnergyMap& map_t, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("energy_quantile(): q in [0,1]");
    std::vector<double> best(map_l.values.size());
    for (std::size_t i = 0; i < best.size(); ++i)
        best[i] = std::max(map_l.values[i], map_t.values[i]);
    std::sort(best.begin(), best.end());
    const std::size_t idx = std::min(best.size() - 1,
                                     static_cast<std::size_t>(q * (best.size() - 1)));
    return best[idx];
}

// Effective, composite and hole metrics at one threshold level.
struct LevelMetrics {
    double eff_l{0.0};
    double eff_t{0.0};
    double both{0.0};    // AND composite
    double either{0.0};  // OR composite
};

inline LevelMetrics level_metrics(const EnergyMap& map_l, const EnergyMap& map_t,
                                  double threshold) {
    LevelMetrics m;
    m.eff_l = effective_coverage(map_l, threshold);
    m.eff_t = effective_coverage(map_t, threshold);
    m.both = composite_coverage(map_l, map_t, threshold, CompositeMode::And);
    m.either = composite_coverage(map_l, map_t, threshold, CompositeMode::Or);
    return m;
}

}  // namespace fanscan
