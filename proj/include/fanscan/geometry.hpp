// Vectors, beam frames and ray/plane intersections used by all link evaluation.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fanscan {

struct Vec3 {
    double x{0.0}, y{0.0}, z{0.0};

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalize(const Vec3& v, double eps = 1e-12) {
    const double n = norm(v);
    if (n < eps) throw std::domain_error("normalize(): zero-length vector");
    return v / n;
}

// Which of the two scanning fans a beam state belongs to.
enum class Fan { Longitudinal, Transverse };

inline const char* fan_name(Fan f) { return f == Fan::Longitudinal ? "L" : "T"; }

// Beam-fixed orthonormal basis: u is the fan (line) axis, v the thickness
// axis, d the propagation axis. Right-handed, u x v = d.
struct BeamFrame {
    Vec3 u, v, d;
};

// The two plane kinds the model needs: the vertical reflector plane x = offset
// and the horizontal evaluation plane z = offset.
enum class PlaneKind { VerticalX, HorizontalZ };

struct PlaneSpec {
    PlaneKind kind{PlaneKind::HorizontalZ};
    double offset{0.0};

    Vec3 normal() const {
        return kind == PlaneKind::VerticalX ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 0.0, 1.0};
    }
    static PlaneSpec vertical_x(double x) { return {PlaneKind::VerticalX, x}; }
    static PlaneSpec horizontal_z(double z) { return {PlaneKind::HorizontalZ, z}; }
};

// Unit propagation vector for elevation theta (from straight down) and
// azimuth phi. theta must lie in [0, pi/2) so the beam points downward.
inline Vec3 direction_vector(double theta, double phi) {
    if (!(theta >= 0.0 && theta < M_PI / 2.0))
        throw std::domain_error("direction_vector(): theta must be in [0, pi/2)");
    const double st = std::sin(theta), ct = std::cos(theta);
    return {st * std::cos(phi), st * std::sin(phi), -ct};
}

// Beam basis for a scan state.
//
// Transverse fan: the line axis u is horizontal and perpendicular to the
// vertical plane containing d ([0,1,0] at phi = 0); the thickness axis v then
// lies in that vertical plane. Longitudinal fan: the roles are swapped -- the
// fan plane is the vertical plane containing d, so its line paints a stripe
// along the beam's ground track while v stays horizontal.
inline BeamFrame beam_frame(double theta, double phi, Fan fan) {
    const Vec3 d = direction_vector(theta, phi);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    BeamFrame f;
    f.d = d;
    if (fan == Fan::Transverse) {
        f.u = {-sp, cp, 0.0};
        f.v = {ct * cp, ct * sp, st};
    } else {
        f.u = {ct * cp, ct * sp, st};
        f.v = {sp, -cp, 0.0};
    }
    return f;
}

struct PlaneHit {
    double t{0.0};  // ray parameter, meters for a unit direction
    Vec3 point;
};

// First intersection of the ray origin + t*dir with the plane. Throws when the
// ray runs parallel to the plane or the hit lies behind the origin.
inline PlaneHit intersect_plane(const Vec3& origin, const Vec3& dir, const PlaneSpec& plane) {
    const Vec3 n = plane.normal();
    const double denom = dot(dir, n);
    if (std::fabs(denom) < 1e-12)
        throw std::domain_error("intersect_plane(): ray parallel to plane");
    const double t = (plane.offset - dot(origin, n)) / denom;
    if (t <= 0.0)
        throw std::domain_error("intersect_plane(): intersection behind transmitter");
    return {t, origin + dir * t};
}

// |dir . normal| for unit vectors, clamped into [0, 1].
inline double incidence_cosine(const Vec3& dir, const Vec3& n) {
    const double c = std::fabs(dot(dir, n));
    return c > 1.0 ? 1.0 : c;
}

struct BeamLocal {
    double x{0.0}, y{0.0}, z{0.0};
};

// Coordinates of a point in the beam frame anchored at origin.
inline BeamLocal to_beam_local(const Vec3& point, const Vec3& origin, const BeamFrame& f) {
    const Vec3 r = point - origin;
    return {dot(r, f.u), dot(r, f.v), dot(r, f.d)};
}

inline Vec3 from_beam_local(const BeamLocal& l, const Vec3& origin, const BeamFrame& f) {
    return origin + f.u * l.x + f.v * l.y + f.d * l.z;
}

inline double deg_to_rad(double deg) { return deg * (M_PI / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / M_PI); }

}  // namespace fanscan
