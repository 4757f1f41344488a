#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fanscan/link_budget.hpp"

using namespace fanscan;

namespace {

MRRConfig default_mrr() {
    MRRConfig m;
    m.array_area = 1e-3;
    m.efficiency = 0.5;
    m.rx_area = 0.01;
    m.retro_half_angle = 1e-3;
    return m;
}

BeamParams test_beam(int order_x = 1, int order_y = 1) {
    return BeamParams::from_divergences(0.5, 1550e-9, deg_to_rad(1.0), deg_to_rad(60.0),
                                        order_x, order_y, M_PI / 2.0, M_PI / 2.0);
}

}  // namespace

TEST_CASE("capture_factor") {
    const MRRConfig mrr = default_mrr();

    CHECK(capture_factor(1e-6, mrr) == Catch::Approx(1.0));

    // boundary: rx area exactly fills the retro lobe
    const double r_star = std::sqrt(mrr.rx_area / M_PI) / mrr.retro_half_angle;
    CHECK(capture_factor(r_star, mrr) == Catch::Approx(1.0).epsilon(1e-12));

    // direct evaluation beyond the clamp
    CHECK(capture_factor(100.0, mrr) == Catch::Approx(0.3183098862).epsilon(1e-9));

    // nonincreasing, continuous at the clamp boundary
    double prev = 1.0;
    for (double r = 1.0; r < 300.0; r += 0.5) {
        const double k = capture_factor(r, mrr);
        REQUIRE(k <= prev + 1e-15);
        prev = k;
    }
    CHECK(capture_factor(r_star * (1.0 + 1e-9), mrr) == Catch::Approx(1.0).epsilon(1e-8));

    CHECK_THROWS_AS(capture_factor(0.0, mrr), std::domain_error);
}

TEST_CASE("received_power chain") {
    const MRRConfig mrr = default_mrr();
    CHECK(received_power(0.0, 50.0, mrr) == 0.0);

    // lossless limit: efficiency 1 and the capture clamp active
    MRRConfig ideal = mrr;
    ideal.efficiency = 1.0;
    CHECK(received_power(2e-3, 1.0, ideal) == Catch::Approx(2e-3).epsilon(1e-12));

    // chain evaluation: eta=0.5, R=100 m, delta=1 mrad, A_rx=0.01 m^2
    CHECK(received_power(1e-3, 100.0, mrr) == Catch::Approx(0.15915494e-3).epsilon(1e-6));
}

TEST_CASE("incident_power on and off axis") {
    const BeamParams beam = test_beam();
    MRRConfig mrr = default_mrr();
    const Vec3 tx{0.0, 0.0, 6.5};
    const double theta = deg_to_rad(60.0);
    const BeamFrame frame = beam_frame(theta, 0.0, Fan::Longitudinal);

    const double range = 10.0;
    const Vec3 on_axis = tx + frame.d * range;

    // normal incidence: align the reflector normal with the beam
    mrr.plane_normal = frame.d;
    const double expected = intensity_at(beam, 0.0, 0.0, range) * mrr.array_area;
    CHECK(incident_power(beam, frame, tx, on_axis, mrr) == Catch::Approx(expected).epsilon(1e-12));

    // vertical reflector plane: cos(gamma) = |d_x|
    mrr.plane_normal = {1.0, 0.0, 0.0};
    CHECK(incident_power(beam, frame, tx, on_axis, mrr) ==
          Catch::Approx(expected * std::sin(theta)).epsilon(1e-12));

    // a 3 w_x offset along the line axis scales the Gaussian by e^-18
    const double wx = beam_radius(beam.waist_x, beam.wavelength, range);
    const Vec3 offset_point = on_axis + frame.u * (3.0 * wx);
    const BeamLocal local = to_beam_local(offset_point, tx, frame);
    const double center_power = intensity_at(beam, 0.0, 0.0, local.z) * mrr.array_area *
                                incidence_cosine(frame.d, mrr.plane_normal);
    CHECK(incident_power(beam, frame, tx, offset_point, mrr) ==
          Catch::Approx(center_power * std::exp(-18.0)).epsilon(1e-9));

    // grazing: normal perpendicular to the beam is no error, just zero
    mrr.plane_normal = normalize(cross(frame.d, frame.u));
    CHECK(incident_power(beam, frame, tx, on_axis, mrr) == 0.0);

    // unreachable point (behind the transmitter plane)
    mrr.plane_normal = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(incident_power(beam, frame, tx, tx - frame.d * 2.0, mrr),
                    std::domain_error);
}

TEST_CASE("small-aperture approximation against patch quadrature") {
    // road geometry: transmitter 6.5 m, reflector plane at 1.5 m, 60 deg beam
    const BeamParams beam = test_beam(8, 1);
    const MRRConfig mrr = default_mrr();
    const Vec3 tx{0.0, 0.0, 6.5};
    const double theta = deg_to_rad(60.0);
    const BeamFrame frame = beam_frame(theta, 0.0, Fan::Longitudinal);

    const PlaneHit hit = intersect_plane(tx, frame.d, PlaneSpec::horizontal_z(1.5));
    const Vec3 center = hit.point;

    const double approx = incident_power(beam, frame, tx, center, mrr);

    // Simpson quadrature of the intensity over the square patch on the
    // vertical reflector plane, times the incidence cosine.
    const double side = std::sqrt(mrr.array_area);
    const int n = 20;  // even
    const double h = side / n;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wy_coef = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        for (int j = 0; j <= n; ++j) {
            const double wz_coef = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            const Vec3 p{center.x, center.y - side / 2.0 + i * h,
                         center.z - side / 2.0 + j * h};
            const BeamLocal l = to_beam_local(p, tx, frame);
            integral += wy_coef * wz_coef * intensity_at(beam, l.x, l.y, l.z);
        }
    }
    integral *= (h / 3.0) * (h / 3.0);
    const double exact = integral * incidence_cosine(frame.d, mrr.plane_normal);

    CHECK(approx == Catch::Approx(exact).epsilon(1e-3));
}

TEST_CASE("evaluate_link composes the chain") {
    const BeamParams beam = test_beam(8, 1);
    const MRRConfig mrr = default_mrr();
    const Vec3 tx{0.0, 0.0, 6.5};

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> theta(deg_to_rad(10.0), deg_to_rad(80.0));
    std::uniform_real_distribution<double> phi(-0.5, 0.5);
    std::uniform_real_distribution<double> px(0.5, 60.0), py(-5.0, 5.0);
    for (int i = 0; i < 300; ++i) {
        const BeamFrame frame = beam_frame(theta(rng), phi(rng), Fan::Longitudinal);
        const Vec3 point{px(rng), py(rng), 1.5};
        const Vec3 r = point - tx;
        if (dot(r, frame.d) <= 0.0) continue;
        const LinkSample s = evaluate_link(beam, frame, tx, point, mrr);

        // recompute every field independently
        const BeamLocal l = to_beam_local(point, tx, frame);
        const double inc = intensity_at(beam, l.x, l.y, l.z) * mrr.array_area *
                           incidence_cosine(frame.d, mrr.plane_normal);
        REQUIRE(s.range == Catch::Approx(norm(r)).epsilon(1e-12));
        REQUIRE(s.incidence_cos ==
                Catch::Approx(incidence_cosine(frame.d, mrr.plane_normal)).epsilon(1e-12));
        if (inc > 0.0) {
            REQUIRE(s.incident_power == Catch::Approx(inc).epsilon(1e-12));
            REQUIRE(s.received_power ==
                    Catch::Approx(mrr.efficiency * capture_factor(s.range, mrr) * inc)
                        .epsilon(1e-12));
        }
        REQUIRE(s.received_power <= mrr.efficiency * s.incident_power + 1e-300);
    }
}

TEST_CASE("linearity in transmit power") {
    const MRRConfig mrr = default_mrr();
    const Vec3 tx{0.0, 0.0, 6.5};
    const BeamFrame frame = beam_frame(deg_to_rad(55.0), 0.1, Fan::Longitudinal);
    const Vec3 point{12.0, 1.0, 1.5};

    BeamParams beam = test_beam(8, 1);
    const LinkSample base = evaluate_link(beam, frame, tx, point, mrr);
    beam.power_tx *= 2.0;
    const LinkSample twice = evaluate_link(beam, frame, tx, point, mrr);
    CHECK(twice.incident_power == Catch::Approx(2.0 * base.incident_power).epsilon(1e-12));
    CHECK(twice.received_power == Catch::Approx(2.0 * base.received_power).epsilon(1e-12));
}

TEST_CASE("far-field inverse-square decay") {
    // clamp the capture factor at 1 with a tiny retro lobe
    MRRConfig mrr = default_mrr();
    mrr.retro_half_angle = 1e-9;
    const BeamParams beam = test_beam();
    const Vec3 tx{0.0, 0.0, 6.5};
    const BeamFrame frame = beam_frame(deg_to_rad(45.0), 0.0, Fan::Longitudinal);
    mrr.plane_normal = frame.d;

    const double zr = std::max(rayleigh_range(beam.waist_x, beam.wavelength),
                               rayleigh_range(beam.waist_y, beam.wavelength));
    const double r0 = std::max(20.0 * zr, 5.0);
    const double p0 = incident_power(beam, frame, tx, tx + frame.d * r0, mrr);
    for (double f : {2.0, 5.0, 10.0}) {
        const double pr = incident_power(beam, frame, tx, tx + frame.d * (f * r0), mrr);
        REQUIRE(pr * f * f == Catch::Approx(p0).epsilon(0.01));
    }
}
