// Incident and received power at a small roof-mounted retroreflector for one
// beam state and one evaluation point.
#pragma once

#include <cmath>
#include <stdexcept>

#include "fanscan/beam_model.hpp"
#include "fanscan/geometry.hpp"

namespace fanscan {

struct MRRConfig {
    double array_area{1e-3};          // m^2
    double efficiency{0.5};           // modulation + reflection efficiency, (0, 1]
    double rx_area{0.01};             // m^2, co-located receive aperture
    double retro_half_angle{1e-3};    // rad, retro-lobe half-angle
    Vec3 plane_normal{1.0, 0.0, 0.0};  // reflector plane normal

    void validate() const {
        if (array_area <= 0.0) throw std::domain_error("MRRConfig: array_area must be > 0");
        if (!(efficiency > 0.0 && efficiency <= 1.0))
            throw std::domain_error("MRRConfig: efficiency must be in (0, 1]");
        if (rx_area <= 0.0) throw std::domain_error("MRRConfig: rx_area must be > 0");
        if (retro_half_angle <= 0.0)
            throw std::domain_error("MRRConfig: retro_half_angle must be > 0");
    }
};

struct LinkSample {
    double range{0.0};
    double incidence_cos{0.0};
    double incident_power{0.0};
    double received_power{0.0};
};

// Fraction of the retro-lobe collected by the receive aperture, clamped to 1.
inline double capture_factor(double range, const MRRConfig& mrr) {
    if (range <= 0.0) throw std::domain_error("capture_factor(): range must be > 0");
    const double lobe = M_PI * (range * mrr.retro_half_angle) * (range * mrr.retro_half_angle);
    const double k = mrr.rx_area / lobe;
    return k > 1.0 ? 1.0 : k;
}

inline double received_power(double incident, double range, const MRRConfig& mrr) {
    if (incident < 0.0) throw std::domain_error("received_power(): incident must be >= 0");
    return mrr.efficiency * capture_factor(range, mrr) * incident;
}

namespace detail {

// Core of the link chain with the point's range precomputed; accumulation
// loops hoist the range per cell so repeated states reuse the same value.
inline LinkSample evaluate_link_at_range(const BeamParams& beam, const BeamFrame& frame,
                                         const Vec3& tx_origin, const Vec3& point,
                                         double range, const MRRConfig& mrr) {
    const BeamLocal local = to_beam_local(point, tx_origin, frame);
    if (local.z <= 0.0)
        throw std::domain_error("evaluate_link(): point not reachable (non-positive ray parameter)");
    LinkSample s;
    s.range = range;
    s.incidence_cos = incidence_cosine(frame.d, mrr.plane_normal);
    s.incident_power =
        intensity_at(beam, local.x, local.y, local.z) * mrr.array_area * s.incidence_cos;
    s.received_power = mrr.efficiency * capture_factor(range, mrr) * s.incident_power;
    return s;
}

}  // namespace detail

// Small-aperture incident power: intensity at the point times array area and
// incidence cosine.
inline double incident_power(const BeamParams& beam, const BeamFrame& frame,
                             const Vec3& tx_origin, const Vec3& point, const MRRConfig& mrr) {
    const BeamLocal local = to_beam_local(point, tx_origin, frame);
    if (local.z <= 0.0)
        throw std::domain_error("incident_power(): point not reachable (non-positive ray parameter)");
    return intensity_at(beam, local.x, local.y, local.z) * mrr.array_area *
           incidence_cosine(frame.d, mrr.plane_normal);
}

inline double incident_power(const BeamParams& beam, double theta, double phi, Fan fan,
                             const Vec3& tx_origin, const Vec3& point, const MRRConfig& mrr) {
    return incident_power(beam, beam_frame(theta, phi, fan), tx_origin, point, mrr);
}

inline LinkSample evaluate_link(const BeamParams& beam, const BeamFrame& frame,
                                const Vec3& tx_origin, const Vec3& point,
                                const MRRConfig& mrr) {
    return detail::evaluate_link_at_range(beam, frame, tx_origin, point,
                                          norm(point - tx_origin), mrr);
}

inline LinkSample evaluate_link(const BeamParams& beam, double theta, double phi, Fan fan,
                                const Vec3& tx_origin, const Vec3& point,
                                const MRRConfig& mrr) {
    return evaluate_link(beam, beam_frame(theta, phi, fan), tx_origin, point, mrr);
}

}  // namespace fanscan
