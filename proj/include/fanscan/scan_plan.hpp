// Scan schedules for both fans: transverse elevation sweep with
// feasibility-clamped fan divergence, longitudinal azimuth sweep on the
// geometric nonuniform grid with span-proportional dwell.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fanscan/beam_model.hpp"
#include "fanscan/geometry.hpp"

namespace fanscan {

struct RoadTopology {
    double length{0.0};      // m, along x, transmitter at x = tx_xy.first
    double width{0.0};       // m, along y
    double tx_height{0.0};   // m
    double mrr_height{0.0};  // m, evaluation height
    std::pair<double, double> tx_xy{0.0, 0.0};

    double gap() const { return tx_height - mrr_height; }
    Vec3 tx_origin() const { return {tx_xy.first, tx_xy.second, tx_height}; }

    void validate() const {
        if (length <= 0.0) throw std::domain_error("RoadTopology: length must be > 0");
        if (width <= 0.0) throw std::domain_error("RoadTopology: width must be > 0");
        if (!(mrr_height > 0.0 && mrr_height < tx_height))
            throw std::domain_error("RoadTopology: need 0 < mrr_height < tx_height");
    }
};

struct AzimuthGridParams {
    double dphi0{0.0};    // rad, initial step around the center
    double alpha{1.0};    // geometric expansion ratio, >= 1
    double phi_max{0.0};  // rad, sweep half-range

    void validate() const {
        if (dphi0 <= 0.0) throw std::domain_error("AzimuthGridParams: dphi0 must be > 0");
        if (alpha < 1.0) throw std::domain_error("AzimuthGridParams: alpha must be >= 1");
        if (!(phi_max > 0.0 && phi_max < M_PI / 2.0))
            throw std::domain_error("AzimuthGridParams: phi_max must be in (0, pi/2)");
    }
};

// One quasi-static dwell of a fan.
struct ScanState {
    Fan fan{Fan::Longitudinal};
    double theta{0.0};      // rad
    double phi{0.0};        // rad
    double div_line{0.0};   // rad, effective line-axis divergence after clamping
    double div_thick{0.0};  // rad
    double dwell{0.0};      // s
};

// Ordered state list covering one full scan cycle of one fan.
struct ScanSchedule {
    std::vector<ScanState> states;
    double period{0.0};  // s
};

// Illuminated span across the road at the evaluation height (transverse fan).
inline double transverse_span(double theta_t, const RoadTopology& topo, double div_y) {
    const double c = std::cos(theta_t);
    if (c < 1e-9) throw std::domain_error("transverse_span(): cos(theta) too small");
    return 2.0 * topo.gap() * std::tan(div_y / 2.0) / c;
}

// Fan divergence that makes the transverse span equal the road width.
// Strictly decreasing in theta_t.
inline double required_fan_divergence(double theta_t, const RoadTopology& topo) {
    return 2.0 * std::atan(topo.width * std::cos(theta_t) / (2.0 * topo.gap()));
}

enum class FootprintModel { Exact, SmallAngle };

// Footprint width along x produced by the transverse fan's thickness spread.
inline double transverse_thickness_footprint(double theta_t, const RoadTopology& topo,
                                             double div_x, FootprintModel model) {
    const double th = std::tan(div_x / 2.0);
    const double sec = 1.0 / std::cos(theta_t);
    const double base = 2.0 * topo.gap() * th * sec * sec;
    if (model == FootprintModel::SmallAngle) return base;
    const double tt = std::tan(theta_t);
    const double denom = 1.0 - th * th * tt * tt;
    if (denom <= 0.0)
        throw std::domain_error(
            "transverse_thickness_footprint(): edge ray parallel to evaluation plane");
    return base / denom;
}

// Horizontal radius of the longitudinal footprint-center locus.
inline double longitudinal_radius(double theta_l, const RoadTopology& topo) {
    return topo.gap() * std::tan(theta_l);
}

// Azimuth beyond which the footprint center leaves the road laterally.
inline double phi_limit(double r_l, const RoadTopology& topo) {
    if (r_l <= 0.0) throw std::domain_error("phi_limit(): r_l must be > 0");
    const double s = std::min(1.0, topo.width / (2.0 * r_l));
    return std::asin(s);
}

// Line-axis divergence that keeps both fan edges inside the road bounds;
// zero at and beyond |phi| = phi_limit.
inline double required_line_divergence(double phi_l, double r_l, const RoadTopology& topo) {
    const double lim = phi_limit(r_l, topo);
    return 2.0 * std::max(0.0, lim - std::fabs(phi_l));
}

// d x / d phi of the footprint center: the sweep crawls near boresight and
// races near the angular edges.
inline double spatial_rate(double phi_l, double r_l) {
    return -r_l * std::sin(phi_l);
}

// Angular slack for the phi_max boundary test. Nodes are accepted up to
// phi_max + this slack so that configurations whose last node lands exactly
// on phi_max are not lost to rounding of the degree conversion.
inline constexpr double kGridBoundaryTol = 1e-9;

// Closed-form positive node m of the sequence.
inline double azimuth_node(const AzimuthGridParams& p, int m) {
    if (p.alpha == 1.0) return m * p.dphi0;
    return p.dphi0 * (std::pow(p.alpha, m) - 1.0) / (p.alpha - 1.0);
}

// Closed-form node count of the geometric azimuth sequence, floor formula
// guarded against 1-ulp noise at exact boundaries. Saturates at 2^30 so a
// degenerate step cannot overflow the cast; such grids fail the state cap
// anyway.
inline int azimuth_node_count(const AzimuthGridParams& p) {
    p.validate();
    double raw;
    if (p.alpha == 1.0) {
        raw = p.phi_max / p.dphi0;
    } else {
        raw = std::log1p((p.alpha - 1.0) * p.phi_max / p.dphi0) / std::log(p.alpha);
    }
    if (!(raw < static_cast<double>(1 << 30))) return 1 << 30;
    int m = static_cast<int>(std::floor(raw));
    while (azimuth_node(p, m + 1) <= p.phi_max + kGridBoundaryTol) ++m;
    while (m > 0 && azimuth_node(p, m) > p.phi_max + kGridBoundaryTol) --m;
    return m;
}

// Symmetric azimuth grid {-phi_M, ..., 0, ..., +phi_M}. Positive nodes follow
// the step recurrence dphi_m = alpha * dphi_{m-1}; negatives mirror them
// bit-exactly. Throws when the grid would exceed the state cap.
inline std::vector<double> azimuth_grid(const AzimuthGridParams& p,
                                        std::size_t max_states = 1000000) {
    p.validate();
    const double bound = p.phi_max + kGridBoundaryTol;
    std::vector<double> positive;
    if (p.alpha == 1.0) {
        for (int m = 1; m * p.dphi0 <= bound; ++m) {
            positive.push_back(m * p.dphi0);
            if (2 * positive.size() + 1 > max_states)
                throw std::length_error("azimuth_grid(): state cap exceeded");
        }
    } else {
        double phi = 0.0, step = p.dphi0;
        while (true) {
            const double next = phi + step;
            if (next > bound) break;
            positive.push_back(next);
            phi = next;
            step *= p.alpha;
            if (2 * positive.size() + 1 > max_states)
                throw std::length_error("azimuth_grid(): state cap exceeded");
        }
    }
    std::vector<double> grid;
    grid.reserve(2 * positive.size() + 1);
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) grid.push_back(-*it);
    grid.push_back(0.0);
    for (double v : positive) grid.push_back(v);
    return grid;
}

// Dwell per node, proportional to the angular span it owns: half the gap to
// each neighbour, edge nodes mirroring their outer half-gap. The center
// element absorbs the rounding residue so the sum equals the period without
// disturbing the mirror symmetry of the grid.
inline std::vector<double> dwell_allocation(const std::vector<double>& grid, double period) {
    if (grid.empty()) throw std::domain_error("dwell_allocation(): empty grid");
    if (period <= 0.0) throw std::domain_error("dwell_allocation(): period must be > 0");
    const std::size_t k = grid.size();
    std::vector<double> dwell(k);
    if (k == 1) {
        dwell[0] = period;
        return dwell;
    }
    std::vector<double> span(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double left = (i == 0) ? grid[1] - grid[0] : grid[i] - grid[i - 1];
        const double right = (i + 1 == k) ? grid[i] - grid[i - 1] : grid[i + 1] - grid[i];
        span[i] = 0.5 * (left + right);
    }
    double total = 0.0;
    for (double s : span) total += s;
    for (std::size_t i = 0; i < k; ++i) dwell[i] = span[i] / total * period;
    for (int pass = 0; pass < 3; ++pass) {
        double sum = 0.0;
        for (double d : dwell) sum += d;
        const double residue = period - sum;
        if (residue == 0.0) break;
        dwell[k / 2] += residue;
    }
    return dwell;
}

struct TransverseSweep {
    double theta_min{0.0};  // rad
    double theta_max{0.0};  // rad
    int count{0};

    void validate() const {
        if (count < 1) throw std::domain_error("TransverseSweep: count must be >= 1");
        if (!(theta_min >= 0.0 && theta_max < M_PI / 2.0 && theta_min <= theta_max))
            throw std::domain_error("TransverseSweep: need 0 <= theta_min <= theta_max < pi/2");
    }
};

struct SchedulePlan {
    double theta_l{0.0};  // rad, fixed elevation of the longitudinal fan
    AzimuthGridParams azimuth;
    TransverseSweep transverse;
    double period_l{0.0};  // s
    double period_t{0.0};  // s
    std::size_t max_states{1000000};
};

// Longitudinal fan: azimuth nodes from the geometric grid at fixed theta_l,
// line divergence clamped to min(div_x_max, required). Nodes whose footprint
// center leaves the road (x bound) or whose admissible line spread vanishes
// are dropped before dwell allocation so dwells still sum to the period.
inline ScanSchedule build_longitudinal_schedule(const RoadTopology& topo,
                                                const BeamParams& beam,
                                                const SchedulePlan& plan) {
    topo.validate();
    const double r_l = longitudinal_radius(plan.theta_l, topo);
    std::vector<double> grid = azimuth_grid(plan.azimuth, plan.max_states);
    std::vector<double> kept;
    kept.reserve(grid.size());
    for (double phi : grid) {
        const double cx = r_l * std::cos(phi) + topo.tx_xy.first;
        if (cx > topo.tx_xy.first + topo.length) continue;
        if (required_line_divergence(phi, r_l, topo) <= 0.0) continue;
        kept.push_back(phi);
    }
    if (kept.empty()) throw std::domain_error("build_longitudinal_schedule(): no usable azimuth states");
    const std::vector<double> dwell = dwell_allocation(kept, plan.period_l);
    ScanSchedule sched;
    sched.period = plan.period_l;
    sched.states.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        ScanState s;
        s.fan = Fan::Longitudinal;
        s.theta = plan.theta_l;
        s.phi = kept[i];
        s.div_line = std::min(beam.div_x_max, required_line_divergence(kept[i], r_l, topo));
        s.div_thick = std::min(beam.div_y_max, beam.div_y());
        s.dwell = dwell[i];
        sched.states.push_back(s);
    }
    return sched;
}

// Transverse fan: uniform elevation grid with uniform dwell, fan divergence
// clamped to min(div_x_max, required for full road width).
inline ScanSchedule build_transverse_schedule(const RoadTopology& topo, const BeamParams& beam,
                                              const SchedulePlan& plan) {
    topo.validate();
    plan.transverse.validate();
    const int n = plan.transverse.count;
    ScanSchedule sched;
    sched.period = plan.period_t;
    sched.states.reserve(static_cast<size_t>(n));
    const double tau = plan.period_t / n;
    for (int i = 0; i < n; ++i) {
        const double theta =
            (n == 1) ? plan.transverse.theta_min
                     : plan.transverse.theta_min +
                           (plan.transverse.theta_max - plan.transverse.theta_min) * i / (n - 1.0);
        ScanState s;
        s.fan = Fan::Transverse;
        s.theta = theta;
        s.phi = 0.0;
        s.div_line = std::min(beam.div_x_max, required_fan_divergence(theta, topo));
        s.div_thick = std::min(beam.div_y_max, beam.div_y());
        s.dwell = tau;
        sched.states.push_back(s);
    }
    // Absorb the division residue so dwells sum to the period exactly.
    for (int pass = 0; pass < 3; ++pass) {
        double sum = 0.0;
        for (const auto& s : sched.states) sum += s.dwell;
        const double residue = plan.period_t - sum;
        if (residue == 0.0) break;
        sched.states.back().dwell += residue;
    }
    return sched;
}

inline std::pair<ScanSchedule, ScanSchedule> build_schedule(const RoadTopology& topo,
                                                            const BeamParams& beam_l,
                                                            const BeamParams& beam_t,
                                                            const SchedulePlan& plan) {
    return {build_longitudinal_schedule(topo, beam_l, plan),
            build_transverse_schedule(topo, beam_t, plan)};
}

}  // namespace fanscan
