#include <cmath>

#include "doctest.h"
#include "mmgeo/quadrature.hpp"
#include "mmgeo/second_order.hpp"

using namespace mmgeo;

namespace {

Scenario open_scenario(double d = 75.0) {
    Scenario s;
    s.d = d;
    s.theta_bt = s.theta_br = deg2rad(30);
    s.phi_t = deg2rad(94);
    s.phi_r = deg2rad(51);
    s.lambda_b = 2e-5;
    s.moments = {15.0, 15.0, 225.0, 225.0};
    return s;
}

}  // namespace

TEST_CASE("image_source_model: degenerate gate gives an empty model") {
    Scenario s;
    // transmitter pointed almost straight back: both gate edges go negative
    s.phi_t = deg2rad(178.0);
    const auto m = image_source_model(s, s.phi_b, FaceDim::Length);
    CHECK(m.empty);
    CHECK(m.p == 0.0);
}

TEST_CASE("image_source_model: zero density keeps geometry, kills occupancy") {
    Scenario s = open_scenario();
    s.lambda_b = 0.0;
    const auto m = image_source_model(s, s.phi_b, FaceDim::Length);
    REQUIRE_FALSE(m.empty);
    CHECK(m.area > 0.0);
    CHECK(m.p == 0.0);
    CHECK(m.d_max > m.support_lo);
}

TEST_CASE("image_distance_pdf: normalized with matching cdf") {
    const Scenario s = open_scenario();
    const auto m = image_source_model(s, s.phi_b, FaceDim::Length);
    REQUIRE_FALSE(m.empty);
    const double total = integrate(
        [&](double x) { return image_distance_pdf(m, x); }, m.support_lo,
        m.support_hi, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(image_distance_pdf(m, m.support_lo - 1.0) == 0.0);
    CHECK(image_distance_pdf(m, m.support_hi + 1.0) == 0.0);
    CHECK(image_distance_cdf(m, m.support_lo) == doctest::Approx(0.0));
    CHECK(image_distance_cdf(m, m.support_hi) == doctest::Approx(1.0));
    // cdf reproduces the partial integral
    const double mid = 0.5 * (m.support_lo + m.support_hi);
    const double part = integrate(
        [&](double x) { return image_distance_pdf(m, x); }, m.support_lo, mid,
        1e-12);
    CHECK(image_distance_cdf(m, mid) == doctest::Approx(part).epsilon(1e-9));
}

TEST_CASE("image_angle_pdf: atom plus density normalizes") {
    const Scenario s = open_scenario();
    const auto m = image_source_model(s, s.phi_b, FaceDim::Length);
    REQUIRE_FALSE(m.empty);
    for (double q : {0.2, 0.5, 0.8}) {
        const double dh = m.support_lo + q * (m.support_hi - m.support_lo);
        const auto ap = image_angle_pdf(m, dh);
        CHECK(ap.atom_mass >= 0.0);
        CHECK(ap.atom_mass <= 1.0);
        const double cont = integrate(
            [&](double t) { return image_angle_density(ap, t); }, ap.lo, ap.hi,
            1e-12);
        CHECK(ap.atom_mass + cont == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(image_angle_density(ap, ap.lo - 1e-3) == 0.0);
        CHECK(image_angle_density(ap, ap.hi + 1e-3) == 0.0);
    }
    // at or below the lower support the conditional law degenerates
    CHECK_THROWS_AS(image_angle_pdf(m, m.support_lo), scenario_error);
}

TEST_CASE("image_upper_edge: ordered and clipped") {
    const Scenario s = open_scenario();
    const auto m = image_source_model(s, s.phi_b, FaceDim::Length);
    REQUIRE_FALSE(m.empty);
    const double dh = 0.5 * (m.support_lo + m.support_hi);
    const auto ap = image_angle_pdf(m, dh);
    const double th = 0.5 * (ap.lo + ap.hi);
    const double lit = image_upper_edge(m, th, dh, UpperEdgeVariant::Literal);
    const double tc =
        image_upper_edge(m, th, dh, UpperEdgeVariant::TanCorrected);
    CHECK(lit >= th);
    CHECK(tc >= th);
    CHECK(lit <= M_PI / 2.0);
    CHECK(tc <= M_PI / 2.0);
}

TEST_CASE("image_support and region membership") {
    const Scenario s = open_scenario();
    const auto m = image_source_model(s, s.phi_b, FaceDim::Length);
    REQUIRE_FALSE(m.empty);
    const double dh = 0.6 * (m.support_lo + m.support_hi);
    const auto ap = image_angle_pdf(m, dh);
    CHECK(image_support_contains(m, dh, 0.5 * (ap.lo + ap.hi)));
    CHECK_FALSE(image_support_contains(m, m.support_hi * 1.01, ap.lo));
    // the membership band at a fixed normal offset has measure c1 + 2 c2 d;
    // scan the along-face axis and compare the occupied length
    const Point2 tx{0.0, 0.0};
    const double want = m.c1 + 2.0 * m.c2 * dh;
    const double guess_lo =
        (dh - m.a_prime / 2.0) / std::tan(m.theta_tif) - m.a;
    const double step = 0.01;
    double occupied = 0.0;
    for (double x = guess_lo - 10.0; x <= guess_lo + want + 10.0; x += step) {
        const Point2 in_frame =
            Point2{tx.x, tx.y} + rotated(Vec2{x, dh}, m.phi_face);
        if (image_region_contains(m, tx, in_frame)) occupied += step;
    }
    CHECK(occupied == doctest::Approx(want).epsilon(0.02));
    // no membership outside the normal-offset band
    bool any = false;
    for (double x = -4.0 * m.d_max; x <= 4.0 * m.d_max; x += 0.5) {
        const Point2 p =
            Point2{tx.x, tx.y} + rotated(Vec2{x, 2.0 * m.d_max}, m.phi_face);
        any = any || image_region_contains(m, tx, p);
    }
    CHECK_FALSE(any);
}
