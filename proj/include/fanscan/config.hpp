// Run configuration: strict JSON ingestion (unknown keys rejected, range
// checks with field paths) and the mapping onto the simulation types.
//
// RunConfig mirrors the file units exactly (degrees, nanometers,
// milliseconds) so that serialize -> load is value-identical; everything
// radian/SI lives in the engine types built by the accessor methods.
#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanscan/coverage.hpp"
#include "fanscan/optimizer.hpp"

namespace fanscan {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace cfg_detail {

inline void require_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError(path + "." + it.key() + ": unknown key");
    }
}

inline const json& require(const json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "." + key + ": missing required field");
    return *it;
}

inline double num(const json& obj, const std::string& path, const std::string& key) {
    const json& v = require(obj, path, key);
    if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return v.get<double>();
}

inline double num_or(const json& obj, const std::string& path, const std::string& key,
                     double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return it->get<double>();
}

inline int integer(const json& obj, const std::string& path, const std::string& key) {
    const json& v = require(obj, path, key);
    if (!v.is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
    return v.get<int>();
}

inline std::string text(const json& obj, const std::string& path, const std::string& key) {
    const json& v = require(obj, path, key);
    if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline void check(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace cfg_detail

// One fan section, file units.
struct FanConfig {
    double power_w{0.5};
    double wavelength_nm{1550.0};
    int order_line{8};
    int order_thick{1};
    double div_line_max_deg{60.0};
    double div_thick_deg{1.0};
    double scan_period_ms{10.0};
};

struct ThresholdConfig {
    bool calibrate{true};
    double target_hole_ratio{0.186};
    double com_quantile_low{0.5};
    double com_quantile_high{0.75};
    Thresholds explicit_values{};  // used when calibrate == false
};

struct OptimizerConfig {
    std::vector<double> dphi0_deg;
    std::vector<double> alpha_values;
    std::vector<double> div_line_max_deg;  // may be empty
    Objective objective{Objective::MinimizeHoleRatio};
    ThresholdLevel level{ThresholdLevel::Pos};

    std::vector<double> dphi0_rad() const {
        std::vector<double> out;
        out.reserve(dphi0_deg.size());
        for (double d : dphi0_deg) out.push_back(deg_to_rad(d));
        return out;
    }
    std::vector<double> div_max_rad() const {
        std::vector<double> out;
        out.reserve(div_line_max_deg.size());
        for (double d : div_line_max_deg) out.push_back(deg_to_rad(d));
        return out;
    }
};

struct RunConfig {
    double road_length_m{100.0};
    double road_width_m{10.0};
    double tx_height_m{6.5};
    double tx_x_m{0.0};
    double tx_y_m{0.0};
    double mrr_height_m{1.5};
    double mrr_array_area_m2{1e-3};
    double mrr_efficiency{0.5};
    double mrr_rx_area_m2{0.01};
    double mrr_retro_half_angle_deg{0.0364};

    FanConfig fan_l;
    FanConfig fan_t;
    double theta_deg{60.0};    // longitudinal elevation
    double dphi0_deg{0.02};
    double alpha{1.0};
    double phi_max_deg{20.0};
    double theta_min_deg{0.0};
    double theta_max_deg{85.0};
    int state_count{200};

    double grid_resolution{0.1};
    unsigned workers{0};
    std::size_t max_states{1000000};
    ThresholdConfig thresholds;
    std::optional<OptimizerConfig> optimizer;
    std::string output_dir{"out"};

    RoadTopology topo() const {
        RoadTopology t;
        t.length = road_length_m;
        t.width = road_width_m;
        t.tx_height = tx_height_m;
        t.mrr_height = mrr_height_m;
        t.tx_xy = {tx_x_m, tx_y_m};
        return t;
    }
    MRRConfig mrr() const {
        MRRConfig m;
        m.array_area = mrr_array_area_m2;
        m.efficiency = mrr_efficiency;
        m.rx_area = mrr_rx_area_m2;
        m.retro_half_angle = deg_to_rad(mrr_retro_half_angle_deg);
        return m;
    }
    BeamParams beam_l() const {
        return BeamParams::from_divergences(
            fan_l.power_w, fan_l.wavelength_nm * 1e-9, deg_to_rad(fan_l.div_line_max_deg),
            deg_to_rad(fan_l.div_thick_deg), fan_l.order_line, fan_l.order_thick,
            deg_to_rad(fan_l.div_line_max_deg), deg_to_rad(fan_l.div_thick_deg));
    }
    BeamParams beam_t() const {
        return BeamParams::from_divergences(
            fan_t.power_w, fan_t.wavelength_nm * 1e-9, deg_to_rad(fan_t.div_line_max_deg),
            deg_to_rad(fan_t.div_thick_deg), fan_t.order_line, fan_t.order_thick,
            deg_to_rad(fan_t.div_line_max_deg), deg_to_rad(fan_t.div_thick_deg));
    }
    AzimuthGridParams azimuth() const {
        return {deg_to_rad(dphi0_deg), alpha, deg_to_rad(phi_max_deg)};
    }
    SchedulePlan plan() const {
        SchedulePlan p;
        p.theta_l = deg_to_rad(theta_deg);
        p.azimuth = azimuth();
        p.transverse = {deg_to_rad(theta_min_deg), deg_to_rad(theta_max_deg), state_count};
        p.period_l = fan_l.scan_period_ms * 1e-3;
        p.period_t = fan_t.scan_period_ms * 1e-3;
        p.max_states = max_states;
        return p;
    }
};

namespace cfg_detail {

inline FanConfig parse_fan(const json& obj, const std::string& path, bool longitudinal) {
    std::set<std::string> keys = {"power_w",        "wavelength_nm",    "order_line",
                                  "order_thick",    "div_line_max_deg", "div_thick_deg",
                                  "scan_period_ms"};
    if (longitudinal) {
        keys.insert({"theta_deg", "dphi0_deg", "alpha", "phi_max_deg"});
    } else {
        keys.insert({"theta_min_deg", "theta_max_deg", "state_count"});
    }
    require_keys(obj, path, keys);
    FanConfig f;
    f.power_w = num(obj, path, "power_w");
    check(f.power_w > 0.0, path + ".power_w: must be > 0");
    f.wavelength_nm = num(obj, path, "wavelength_nm");
    check(f.wavelength_nm > 0.0, path + ".wavelength_nm: must be > 0");
    f.order_line = integer(obj, path, "order_line");
    f.order_thick = integer(obj, path, "order_thick");
    check(f.order_line >= 1 && f.order_line <= kMaxOrder,
          path + ".order_line: must be in [1, 64]");
    check(f.order_thick >= 1 && f.order_thick <= kMaxOrder,
          path + ".order_thick: must be in [1, 64]");
    f.div_line_max_deg = num(obj, path, "div_line_max_deg");
    check(f.div_line_max_deg > 0.0 && f.div_line_max_deg < 180.0,
          path + ".div_line_max_deg: must be in (0, 180)");
    f.div_thick_deg = num(obj, path, "div_thick_deg");
    check(f.div_thick_deg > 0.0 && f.div_thick_deg < 180.0,
          path + ".div_thick_deg: must be in (0, 180)");
    f.scan_period_ms = num(obj, path, "scan_period_ms");
    check(f.scan_period_ms > 0.0, path + ".scan_period_ms: must be > 0");
    return f;
}

}  // namespace cfg_detail

inline RunConfig config_from_json(const json& root) {
    using namespace cfg_detail;
    require_keys(root, "config",
                 {"road", "transmitter", "mrr", "longitudinal", "transverse", "grid",
                  "thresholds", "optimizer", "output_dir", "max_states"});

    RunConfig c;

    const json& road = require(root, "config", "road");
    require_keys(road, "road", {"length_m", "width_m"});
    c.road_length_m = num(road, "road", "length_m");
    c.road_width_m = num(road, "road", "width_m");
    check(c.road_length_m > 0.0, "road.length_m: must be > 0");
    check(c.road_width_m > 0.0, "road.width_m: must be > 0");

    const json& tx = require(root, "config", "transmitter");
    require_keys(tx, "transmitter", {"height_m", "x_m", "y_m"});
    c.tx_height_m = num(tx, "transmitter", "height_m");
    c.tx_x_m = num(tx, "transmitter", "x_m");
    c.tx_y_m = num(tx, "transmitter", "y_m");

    const json& mrr = require(root, "config", "mrr");
    require_keys(mrr, "mrr",
                 {"height_m", "array_area_m2", "efficiency", "rx_area_m2",
                  "retro_half_angle_deg"});
    c.mrr_height_m = num(mrr, "mrr", "height_m");
    check(c.mrr_height_m > 0.0, "mrr.height_m: must be > 0");
    check(c.mrr_height_m < c.tx_height_m,
          "mrr.height_m: must be below transmitter.height_m");
    c.mrr_array_area_m2 = num(mrr, "mrr", "array_area_m2");
    c.mrr_efficiency = num(mrr, "mrr", "efficiency");
    c.mrr_rx_area_m2 = num(mrr, "mrr", "rx_area_m2");
    c.mrr_retro_half_angle_deg = num(mrr, "mrr", "retro_half_angle_deg");
    check(c.mrr_array_area_m2 > 0.0, "mrr.array_area_m2: must be > 0");
    check(c.mrr_efficiency > 0.0 && c.mrr_efficiency <= 1.0,
          "mrr.efficiency: must be in (0, 1]");
    check(c.mrr_rx_area_m2 > 0.0, "mrr.rx_area_m2: must be > 0");
    check(c.mrr_retro_half_angle_deg > 0.0, "mrr.retro_half_angle_deg: must be > 0");

    const json& lon = require(root, "config", "longitudinal");
    c.fan_l = parse_fan(lon, "longitudinal", true);
    c.theta_deg = num(lon, "longitudinal", "theta_deg");
    check(c.theta_deg > 0.0 && c.theta_deg < 90.0,
          "longitudinal.theta_deg: must be in (0, 90)");
    c.dphi0_deg = num(lon, "longitudinal", "dphi0_deg");
    c.alpha = num(lon, "longitudinal", "alpha");
    c.phi_max_deg = num(lon, "longitudinal", "phi_max_deg");
    check(c.dphi0_deg > 0.0, "longitudinal.dphi0_deg: must be > 0");
    check(c.alpha >= 1.0, "longitudinal.alpha: must be >= 1");
    check(c.phi_max_deg > 0.0 && c.phi_max_deg < 90.0,
          "longitudinal.phi_max_deg: must be in (0, 90)");

    const json& tra = require(root, "config", "transverse");
    c.fan_t = parse_fan(tra, "transverse", false);
    c.theta_min_deg = num(tra, "transverse", "theta_min_deg");
    c.theta_max_deg = num(tra, "transverse", "theta_max_deg");
    c.state_count = integer(tra, "transverse", "state_count");
    check(c.state_count >= 1, "transverse.state_count: must be >= 1");
    check(c.theta_min_deg >= 0.0 && c.theta_max_deg < 90.0 &&
              c.theta_min_deg <= c.theta_max_deg,
          "transverse.theta_min_deg/theta_max_deg: need 0 <= min <= max < 90");

    const json& grid = require(root, "config", "grid");
    require_keys(grid, "grid", {"resolution_m", "workers"});
    c.grid_resolution = num(grid, "grid", "resolution_m");
    check(c.grid_resolution > 0.0, "grid.resolution_m: must be > 0");
    const double workers = num_or(grid, "grid", "workers", 0.0);
    check(workers >= 0.0 && workers <= 1024.0, "grid.workers: must be in [0, 1024]");
    c.workers = static_cast<unsigned>(workers);

    const json& thr = require(root, "config", "thresholds");
    require_keys(thr, "thresholds",
                 {"mode", "target_hole_ratio", "com_quantile_low", "com_quantile_high",
                  "pos_j", "sen_j", "com_low_j", "com_high_j"});
    const std::string mode = text(thr, "thresholds", "mode");
    if (mode == "calibrate") {
        c.thresholds.calibrate = true;
        c.thresholds.target_hole_ratio =
            num_or(thr, "thresholds", "target_hole_ratio", 0.186);
        c.thresholds.com_quantile_low = num_or(thr, "thresholds", "com_quantile_low", 0.5);
        c.thresholds.com_quantile_high = num_or(thr, "thresholds", "com_quantile_high", 0.75);
        check(c.thresholds.target_hole_ratio > 0.0 && c.thresholds.target_hole_ratio < 1.0,
              "thresholds.target_hole_ratio: must be in (0, 1)");
        check(c.thresholds.com_quantile_low >= 0.0 &&
                  c.thresholds.com_quantile_low <= c.thresholds.com_quantile_high &&
                  c.thresholds.com_quantile_high <= 1.0,
              "thresholds.com_quantile_low/high: need 0 <= low <= high <= 1");
    } else if (mode == "explicit") {
        c.thresholds.calibrate = false;
        Thresholds& t = c.thresholds.explicit_values;
        t.pos = num(thr, "thresholds", "pos_j");
        t.sen = num(thr, "thresholds", "sen_j");
        t.com_low = num(thr, "thresholds", "com_low_j");
        t.com_high = num(thr, "thresholds", "com_high_j");
        try {
            t.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("thresholds: ") + e.what());
        }
    } else {
        throw ConfigError("thresholds.mode: must be \"calibrate\" or \"explicit\"");
    }

    if (root.contains("optimizer")) {
        const json& opt = root.at("optimizer");
        require_keys(opt, "optimizer",
                     {"dphi0_deg", "alpha", "div_line_max_deg", "objective", "level"});
        OptimizerConfig oc;
        const json& dphi = require(opt, "optimizer", "dphi0_deg");
        const json& alpha = require(opt, "optimizer", "alpha");
        if (!dphi.is_array()) throw ConfigError("optimizer.dphi0_deg: expected an array");
        if (!alpha.is_array()) throw ConfigError("optimizer.alpha: expected an array");
        for (const json& v : dphi) oc.dphi0_deg.push_back(v.get<double>());
        for (const json& v : alpha) oc.alpha_values.push_back(v.get<double>());
        if (opt.contains("div_line_max_deg")) {
            const json& dm = opt.at("div_line_max_deg");
            if (!dm.is_array())
                throw ConfigError("optimizer.div_line_max_deg: expected an array");
            for (const json& v : dm) oc.div_line_max_deg.push_back(v.get<double>());
        }
        const std::string obj = text(opt, "optimizer", "objective");
        if (obj == "min_hole") oc.objective = Objective::MinimizeHoleRatio;
        else if (obj == "max_effective") oc.objective = Objective::MaximizeEffectiveCoverage;
        else throw ConfigError("optimizer.objective: must be \"min_hole\" or \"max_effective\"");
        const std::string lvl = text(opt, "optimizer", "level");
        if (lvl == "pos") oc.level = ThresholdLevel::Pos;
        else if (lvl == "sen") oc.level = ThresholdLevel::Sen;
        else if (lvl == "com_low") oc.level = ThresholdLevel::ComLow;
        else if (lvl == "com_high") oc.level = ThresholdLevel::ComHigh;
        else throw ConfigError("optimizer.level: must be one of pos/sen/com_low/com_high");
        c.optimizer = std::move(oc);
    }

    if (root.contains("output_dir")) {
        const json& od = root.at("output_dir");
        if (!od.is_string()) throw ConfigError("output_dir: expected a string");
        c.output_dir = od.get<std::string>();
    }
    if (root.contains("max_states")) {
        const json& ms = root.at("max_states");
        if (!ms.is_number_integer() || ms.get<long long>() < 1)
            throw ConfigError("max_states: expected a positive integer");
        c.max_states = ms.get<std::size_t>();
    }

    try {
        c.topo().validate();
        c.mrr().validate();
        c.azimuth().validate();
        c.plan().transverse.validate();
        c.beam_l().validate();
        c.beam_t().validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

inline json config_to_json(const RunConfig& c) {
    json root;
    root["road"] = {{"length_m", c.road_length_m}, {"width_m", c.road_width_m}};
    root["transmitter"] = {{"height_m", c.tx_height_m}, {"x_m", c.tx_x_m}, {"y_m", c.tx_y_m}};
    root["mrr"] = {{"height_m", c.mrr_height_m},
                   {"array_area_m2", c.mrr_array_area_m2},
                   {"efficiency", c.mrr_efficiency},
                   {"rx_area_m2", c.mrr_rx_area_m2},
                   {"retro_half_angle_deg", c.mrr_retro_half_angle_deg}};
    root["longitudinal"] = {{"power_w", c.fan_l.power_w},
                            {"wavelength_nm", c.fan_l.wavelength_nm},
                            {"order_line", c.fan_l.order_line},
                            {"order_thick", c.fan_l.order_thick},
                            {"div_line_max_deg", c.fan_l.div_line_max_deg},
                            {"div_thick_deg", c.fan_l.div_thick_deg},
                            {"scan_period_ms", c.fan_l.scan_period_ms},
                            {"theta_deg", c.theta_deg},
                            {"dphi0_deg", c.dphi0_deg},
                            {"alpha", c.alpha},
                            {"phi_max_deg", c.phi_max_deg}};
    root["transverse"] = {{"power_w", c.fan_t.power_w},
                          {"wavelength_nm", c.fan_t.wavelength_nm},
                          {"order_line", c.fan_t.order_line},
                          {"order_thick", c.fan_t.order_thick},
                          {"div_line_max_deg", c.fan_t.div_line_max_deg},
                          {"div_thick_deg", c.fan_t.div_thick_deg},
                          {"scan_period_ms", c.fan_t.scan_period_ms},
                          {"theta_min_deg", c.theta_min_deg},
                          {"theta_max_deg", c.theta_max_deg},
                          {"state_count", c.state_count}};
    root["grid"] = {{"resolution_m", c.grid_resolution},
                    {"workers", static_cast<int>(c.workers)}};
    if (c.thresholds.calibrate) {
        root["thresholds"] = {{"mode", "calibrate"},
                              {"target_hole_ratio", c.thresholds.target_hole_ratio},
                              {"com_quantile_low", c.thresholds.com_quantile_low},
                              {"com_quantile_high", c.thresholds.com_quantile_high}};
    } else {
        const Thresholds& t = c.thresholds.explicit_values;
        root["thresholds"] = {{"mode", "explicit"},
                              {"pos_j", t.pos},
                              {"sen_j", t.sen},
                              {"com_low_j", t.com_low},
                              {"com_high_j", t.com_high}};
    }
    if (c.optimizer) {
        json opt;
        opt["dphi0_deg"] = c.optimizer->dphi0_deg;
        opt["alpha"] = c.optimizer->alpha_values;
        if (!c.optimizer->div_line_max_deg.empty())
            opt["div_line_max_deg"] = c.optimizer->div_line_max_deg;
        opt["objective"] = c.optimizer->objective == Objective::MinimizeHoleRatio
                               ? "min_hole"
                               : "max_effective";
        opt["level"] = threshold_level_name(c.optimizer->level);
        root["optimizer"] = std::move(opt);
    }
    root["output_dir"] = c.output_dir;
    root["max_states"] = c.max_states;
    return root;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(root);
}

}  // namespace fanscan
