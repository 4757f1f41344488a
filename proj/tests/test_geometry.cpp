#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fanscan/geometry.hpp"

using namespace fanscan;

TEST_CASE("direction_vector basic cases") {
    const Vec3 down = direction_vector(0.0, 0.0);
    CHECK(down.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(down.y == Catch::Approx(0.0).margin(1e-15));
    CHECK(down.z == Catch::Approx(-1.0).margin(1e-15));

    const Vec3 nearly_flat = direction_vector(M_PI / 2.0 - 1e-9, 0.0);
    CHECK(nearly_flat.x == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::fabs(nearly_flat.z) < 1e-8);

    // direct trigonometric evaluation at (60 deg, 30 deg)
    const Vec3 d = direction_vector(deg_to_rad(60.0), deg_to_rad(30.0));
    CHECK(d.x == Catch::Approx(0.75).epsilon(1e-12));
    CHECK(d.y == Catch::Approx(0.4330127018922193).epsilon(1e-12));
    CHECK(d.z == Catch::Approx(-0.5).epsilon(1e-12));

    CHECK_THROWS_AS(direction_vector(-0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(direction_vector(M_PI / 2.0, 0.0), std::domain_error);
}

TEST_CASE("direction_vector is unit length over the domain") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> theta(0.0, M_PI / 2.0 - 1e-9);
    std::uniform_real_distribution<double> phi(-M_PI, M_PI);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 d = direction_vector(theta(rng), phi(rng));
        REQUIRE(std::fabs(norm(d) - 1.0) < 1e-12);
    }
}

TEST_CASE("beam_frame transverse matches the reference configuration") {
    const BeamFrame f = beam_frame(deg_to_rad(35.0), 0.0, Fan::Transverse);
    CHECK(f.u.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(f.u.y == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(f.u.z == Catch::Approx(0.0).margin(1e-15));
    // v completes the right-handed triad
    const Vec3 v = cross(f.d, f.u);
    CHECK(norm(v - f.v) < 1e-12);
}

TEST_CASE("beam_frame longitudinal line axis lies in the beam's vertical plane") {
    const BeamFrame f = beam_frame(deg_to_rad(60.0), deg_to_rad(12.0), Fan::Longitudinal);
    // the azimuthal (horizontal, cross-plane) direction at phi
    const Vec3 e_phi{-std::sin(deg_to_rad(12.0)), std::cos(deg_to_rad(12.0)), 0.0};
    CHECK(std::fabs(dot(f.u, e_phi)) < 1e-12);  // u has no cross-plane component
    CHECK(f.u.z > 0.0);                          // oriented toward larger elevation
    CHECK(std::fabs(f.v.z) < 1e-15);             // thickness axis horizontal
}

TEST_CASE("beam_frame orthonormal right-handed for both fans") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> theta(0.0, M_PI / 2.0 - 1e-6);
    std::uniform_real_distribution<double> phi(-M_PI, M_PI);
    for (int i = 0; i < 500; ++i) {
        for (Fan fan : {Fan::Longitudinal, Fan::Transverse}) {
            const BeamFrame f = beam_frame(theta(rng), phi(rng), fan);
            REQUIRE(std::fabs(norm(f.u) - 1.0) < 1e-12);
            REQUIRE(std::fabs(norm(f.v) - 1.0) < 1e-12);
            REQUIRE(std::fabs(norm(f.d) - 1.0) < 1e-12);
            REQUIRE(std::fabs(dot(f.u, f.v)) < 1e-12);
            REQUIRE(std::fabs(dot(f.u, f.d)) < 1e-12);
            REQUIRE(std::fabs(dot(f.v, f.d)) < 1e-12);
            // determinant of [u v d] via the triple product
            const double det = dot(cross(f.u, f.v), f.d);
            REQUIRE(det == Catch::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("intersect_plane cases from the road geometry") {
    const Vec3 origin{0.0, 0.0, 6.5};

    auto hit = intersect_plane(origin, {0.0, 0.0, -1.0}, PlaneSpec::horizontal_z(1.5));
    CHECK(hit.t == Catch::Approx(5.0).epsilon(1e-12));
    CHECK(hit.point.z == Catch::Approx(1.5).margin(1e-12));

    // slanted drop: t = gap / cos(theta)
    auto slant = intersect_plane(origin, direction_vector(deg_to_rad(60.0), 0.0),
                                 PlaneSpec::horizontal_z(1.5));
    CHECK(slant.t == Catch::Approx(10.0).epsilon(1e-12));
    CHECK(slant.point.x == Catch::Approx(10.0 * std::sin(deg_to_rad(60.0))).epsilon(1e-12));

    CHECK_THROWS_AS(intersect_plane(origin, {0.0, 1.0, 0.0}, PlaneSpec::vertical_x(3.0)),
                    std::domain_error);
    CHECK_THROWS_AS(intersect_plane(origin, {-1.0, 0.0, 0.0}, PlaneSpec::vertical_x(3.0)),
                    std::domain_error);

    // vertical plane: t = (x_v - x0) / d_x
    auto vert = intersect_plane(origin, direction_vector(deg_to_rad(60.0), 0.0),
                                PlaneSpec::vertical_x(4.0));
    CHECK(vert.t == Catch::Approx(4.0 / std::sin(deg_to_rad(60.0))).epsilon(1e-12));
    CHECK(vert.point.x == Catch::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("intersect_plane result satisfies the plane equation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> theta(0.0, M_PI / 2.0 - 0.05);
    std::uniform_real_distribution<double> phi(-1.0, 1.0);
    std::uniform_real_distribution<double> height(2.0, 30.0);
    for (int i = 0; i < 500; ++i) {
        const Vec3 origin{0.0, 0.0, height(rng)};
        const Vec3 dir = direction_vector(theta(rng), phi(rng));
        const PlaneSpec plane = PlaneSpec::horizontal_z(height(rng) * 0.05);
        const PlaneHit hit = intersect_plane(origin, dir, plane);
        REQUIRE(std::fabs(hit.point.z - plane.offset) < 1e-9);
        REQUIRE(hit.t > 0.0);
    }
}

TEST_CASE("incidence_cosine") {
    CHECK(incidence_cosine({1, 0, 0}, {1, 0, 0}) == Catch::Approx(1.0));
    CHECK(incidence_cosine({0, 0, -1}, {1, 0, 0}) == Catch::Approx(0.0).margin(1e-15));
    const Vec3 d = direction_vector(deg_to_rad(60.0), 0.0);
    CHECK(incidence_cosine(d, {1, 0, 0}) == Catch::Approx(std::sin(deg_to_rad(60.0))).epsilon(1e-12));
}

TEST_CASE("to_beam_local round-trips") {
    const Vec3 origin{1.0, -2.0, 6.5};
    const BeamFrame f = beam_frame(deg_to_rad(40.0), deg_to_rad(-15.0), Fan::Longitudinal);

    const BeamLocal at_origin = to_beam_local(origin, origin, f);
    CHECK(std::fabs(at_origin.x) < 1e-15);
    CHECK(std::fabs(at_origin.y) < 1e-15);
    CHECK(std::fabs(at_origin.z) < 1e-15);

    const BeamLocal on_axis = to_beam_local(origin + f.d * 3.0, origin, f);
    CHECK(on_axis.z == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(std::fabs(on_axis.x) < 1e-12);

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p{coord(rng), coord(rng), coord(rng)};
        const BeamLocal l = to_beam_local(p, origin, f);
        const Vec3 back = from_beam_local(l, origin, f);
        REQUIRE(norm(back - p) < 1e-9);
    }
}
