// Anisotropic super-Gaussian beam: power-conserving intensity profile with
// independent divergence, waist and shape order per transverse axis.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fanscan/geometry.hpp"

namespace fanscan {

// Exponent cap and flush threshold keep tail evaluation deterministic across
// platforms: exp arguments are capped at 700 and intensities below
// 1e-300 W/m^2 are treated as zero.
inline constexpr double kExponentCap = 700.0;
inline constexpr double kIntensityFlush = 1e-300;
inline constexpr int kMaxOrder = 64;

// x^n for small non-negative integer n, by squaring. Exact for the integer
// orders the profile uses.
inline double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

// C(n) = 2^(-1/(2n)) * Gamma(1/(2n)) / n, the value of the unit-width profile
// integral over the real line. Memoized; the local static is initialized
// thread-safely on first use.
inline double normalization_constant(int order) {
    if (order < 1 || order > kMaxOrder)
        throw std::domain_error("normalization_constant(): order must be in [1, 64]");
    static const std::array<double, kMaxOrder + 1> table = [] {
        std::array<double, kMaxOrder + 1> t{};
        for (int n = 1; n <= kMaxOrder; ++n) {
            const double inv2n = 1.0 / (2.0 * n);
            t[static_cast<size_t>(n)] = std::pow(2.0, -inv2n) * std::tgamma(inv2n) / n;
        }
        return t;
    }();
    return table[static_cast<size_t>(order)];
}

inline double divergence_from_waist(double wavelength, double waist) {
    if (waist <= 0.0) throw std::domain_error("divergence_from_waist(): waist must be > 0");
    return wavelength / (M_PI * waist);
}

inline double waist_from_divergence(double wavelength, double div) {
    if (div <= 0.0) throw std::domain_error("waist_from_divergence(): divergence must be > 0");
    return wavelength / (M_PI * div);
}

inline double rayleigh_range(double waist, double wavelength) {
    return M_PI * waist * waist / wavelength;
}

// Gaussian-equivalent width growth; the far-field slope w(z)/z approaches
// wavelength/(pi*waist), matching the divergence definition above.
inline double beam_radius(double waist, double wavelength, double z) {
    if (z < 0.0) throw std::domain_error("beam_radius(): z must be >= 0");
    const double zr = rayleigh_range(waist, wavelength);
    const double q = z / zr;
    return waist * std::sqrt(1.0 + q * q);
}

// One fan's optical description. The x axis is the fan (line) axis, the y
// axis the thickness axis, in the beam-local frame of beam_frame().
struct BeamParams {
    double power_tx{0.0};    // W
    double wavelength{0.0};  // m
    double waist_x{0.0};     // m, line axis
    double waist_y{0.0};     // m, thickness axis
    int order_x{1};
    int order_y{1};
    double div_x_max{0.0};  // rad, clamp limit for the line axis
    double div_y_max{0.0};  // rad, clamp limit for the thickness axis

    void validate() const {
        if (power_tx <= 0.0) throw std::domain_error("BeamParams: power_tx must be > 0");
        if (wavelength <= 0.0) throw std::domain_error("BeamParams: wavelength must be > 0");
        if (waist_x <= 0.0 || waist_y <= 0.0)
            throw std::domain_error("BeamParams: waists must be > 0");
        if (order_x < 1 || order_y < 1)
            throw std::domain_error("BeamParams: orders must be >= 1");
    }

    double div_x() const { return divergence_from_waist(wavelength, waist_x); }
    double div_y() const { return divergence_from_waist(wavelength, waist_y); }

    // Same beam with the waists set from effective divergences (used per scan
    // state after the feasibility clamps).
    BeamParams with_divergences(double div_x_eff, double div_y_eff) const {
        BeamParams b = *this;
        b.waist_x = waist_from_divergence(wavelength, div_x_eff);
        b.waist_y = waist_from_divergence(wavelength, div_y_eff);
        return b;
    }

    static BeamParams from_divergences(double power, double wavelength, double div_x,
                                       double div_y, int order_x, int order_y,
                                       double div_x_max, double div_y_max) {
        BeamParams b;
        b.power_tx = power;
        b.wavelength = wavelength;
        b.waist_x = waist_from_divergence(wavelength, div_x);
        b.waist_y = waist_from_divergence(wavelength, div_y);
        b.order_x = order_x;
        b.order_y = order_y;
        b.div_x_max = div_x_max;
        b.div_y_max = div_y_max;
        b.validate();
        return b;
    }
};

// Per-axis widths and on-axis intensity at one propagation distance.
struct BeamProfileAt {
    double radius_x{0.0};  // m
    double radius_y{0.0};  // m
    double peak{0.0};      // W/m^2
};

// On-axis normalization: the cross-sectional power integral equals power_tx
// at every z'.
inline double peak_intensity(const BeamParams& p) {
    return p.power_tx /
           (p.waist_x * p.waist_y * normalization_constant(p.order_x) *
            normalization_constant(p.order_y));
}

inline BeamProfileAt profile_at(const BeamParams& p, double z) {
    if (z <= 0.0) throw std::domain_error("profile_at(): z' must be > 0");
    BeamProfileAt out;
    out.radius_x = beam_radius(p.waist_x, p.wavelength, z);
    out.radius_y = beam_radius(p.waist_y, p.wavelength, z);
    out.peak = peak_intensity(p) * (p.waist_x / out.radius_x) * (p.waist_y / out.radius_y);
    return out;
}

// Super-Gaussian intensity at beam-local (x', y', z'), W/m^2.
inline double intensity_at(const BeamParams& p, double x, double y, double z) {
    if (z <= 0.0) throw std::domain_error("intensity_at(): z' must be > 0");
    const double wx = beam_radius(p.waist_x, p.wavelength, z);
    const double wy = beam_radius(p.waist_y, p.wavelength, z);
    const double ux = x / wx;
    const double uy = y / wy;
    double arg = 2.0 * (ipow(ux * ux, p.order_x) + ipow(uy * uy, p.order_y));
    if (arg > kExponentCap) arg = kExponentCap;
    const double val = peak_intensity(p) * (p.waist_x / wx) * (p.waist_y / wy) * std::exp(-arg);
    return val < kIntensityFlush ? 0.0 : val;
}

struct ProfileSample {
    double offset{0.0};      // m along the line axis
    double normalized{0.0};  // intensity / on-axis intensity
};

// 1-D normalized cut along the line axis at distance z; diagnostic for the
// flat-top behaviour of high shape orders.
inline std::vector<ProfileSample> profile_flatness(int order, double div_x, double div_y,
                                                   double z, int samples = 401,
                                                   double half_span_widths = 1.5) {
    if (z <= 0.0) throw std::domain_error("profile_flatness(): z must be > 0");
    if (samples < 3) throw std::domain_error("profile_flatness(): need at least 3 samples");
    // The cut runs along the axis whose divergence is div_x and order varies.
    BeamParams p = BeamParams::from_divergences(1.0, 1550e-9, div_x, div_y, order, 1,
                                                div_x, div_y);
    const double wx = beam_radius(p.waist_x, p.wavelength, z);
    const double on_axis = intensity_at(p, 0.0, 0.0, z);
    std::vector<ProfileSample> out;
    out.reserve(static_cast<size_t>(samples));
    const double span = half_span_widths * wx;
    for (int i = 0; i < samples; ++i) {
        const double x = -span + (2.0 * span) * i / (samples - 1);
        out.push_back({x, intensity_at(p, x, 0.0, z) / on_axis});
    }
    return out;
}

}  // namespace fanscan
