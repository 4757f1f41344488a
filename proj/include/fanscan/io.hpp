// Text artifact writers and readers: energy-map CSV, area-class graymap,
// optimizer tables. All numeric formatting is locale-independent with '.'
// decimal separator and LF line endings.
#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "fanscan/coverage.hpp"
#include "fanscan/optimizer.hpp"

namespace fanscan {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Scientific notation with 9 significant digits via to_chars; never consults
// the locale.
inline std::string format_sci(double v, int significant = 9) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific,
                             significant - 1);
    if (res.ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf, res.ptr);
}

inline std::string format_general(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw IoError("number formatting failed");
    return std::string(buf, res.ptr);
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

// Energy map as CSV: one header row with the cell-center x coordinates, then
// one row per y index with the per-cell energies in joules.
inline void write_energy_map_csv(const EnergyMap& map, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    const RoadGrid& g = map.grid;
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
        if (ix) out << ',';
        out << format_sci(g.cell_x(ix));
    }
    out << '\n';
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            if (ix) out << ',';
            out << format_sci(map.values[iy * g.nx + ix]);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

struct CsvMap {
    std::vector<double> x_centers;
    std::vector<std::vector<double>> rows;
};

inline CsvMap load_energy_map_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    CsvMap out;
    std::string line;
    auto parse_row = [](const std::string& s) {
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            std::size_t comma = s.find(',', pos);
            if (comma == std::string::npos) comma = s.size();
            double v = 0.0;
            auto res = std::from_chars(s.data() + pos, s.data() + comma, v);
            if (res.ec != std::errc()) throw IoError("malformed CSV number");
            row.push_back(v);
            pos = comma + 1;
            if (comma == s.size()) break;
        }
        return row;
    };
    if (!std::getline(in, line)) throw IoError("empty CSV " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.x_centers = parse_row(line);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out.rows.push_back(parse_row(line));
        if (out.rows.back().size() != out.x_centers.size())
            throw IoError("ragged CSV row in " + path.string());
    }
    return out;
}

// Area classes as a plain-text portable graymap (P2), maxval 4. Pixel values
// are the class ids 1..4; 0 stays reserved for off-road pixels.
inline void write_classes_pgm(const AreaClassification& cls, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    const RoadGrid& g = cls.grid;
    out << "P2\n" << g.nx << ' ' << g.ny << "\n4\n";
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            if (ix) out << ' ';
            out << static_cast<int>(cls.classes[iy * g.nx + ix]);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

struct PgmImage {
    std::size_t width{0}, height{0};
    int maxval{0};
    std::vector<int> pixels;
};

inline PgmImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P2") throw IoError("not a P2 graymap: " + path.string());
    PgmImage img;
    in >> img.width >> img.height >> img.maxval;
    img.pixels.reserve(img.width * img.height);
    int v;
    while (in >> v) img.pixels.push_back(v);
    if (img.pixels.size() != img.width * img.height)
        throw IoError("truncated graymap: " + path.string());
    return img;
}

inline void write_optimizer_csv(const SearchResult& result, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << "dphi0_deg,alpha,div_line_max_deg,k_states,feasible,hole_ratio,eff_l,and,or,"
           "runtime_s\n";
    for (const auto& r : result.rows) {
        out << format_sci(rad_to_deg(r.dphi0)) << ',' << format_general(r.alpha) << ',';
        out << (r.div_max ? format_sci(rad_to_deg(*r.div_max)) : std::string("-")) << ',';
        out << r.k_states << ',' << (r.feasible ? 1 : 0) << ',';
        out << format_sci(r.hole_ratio) << ',' << format_sci(r.eff_l) << ','
            << format_sci(r.both) << ',' << format_sci(r.either) << ','
            << format_sci(r.runtime_s) << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

// Fig-2 style normalized line-axis cuts, one column per shape order.
inline void write_profile_csv(const std::vector<int>& orders,
                              const std::vector<std::vector<ProfileSample>>& cuts,
                              const std::filesystem::path& path) {
    if (orders.empty() || cuts.size() != orders.size())
        throw IoError("profile: order/cut mismatch");
    std::ofstream out = open_for_write(path);
    out << "offset_m";
    for (int n : orders) out << ",n" << n;
    out << '\n';
    const std::size_t samples = cuts.front().size();
    for (const auto& c : cuts)
        if (c.size() != samples) throw IoError("profile: ragged cuts");
    for (std::size_t i = 0; i < samples; ++i) {
        out << format_sci(cuts.front()[i].offset);
        for (const auto& c : cuts) out << ',' << format_sci(c[i].normalized);
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace fanscan
