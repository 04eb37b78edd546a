#include <cmath>
#include <random>

#include "doctest.h"
#include "mmgeo/pdp.hpp"
#include "mmgeo/quadrature.hpp"

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

/// Panel-wise adaptive integral of pdp * tau^k over the model support.
double pdp_moment(const PdpModel& m, int k) {
    double total = 0.0;
    const int panels = 64;
    for (int i = 0; i < panels; ++i) {
        const double a = m.tau_min + (m.tau_max - m.tau_min) * i / panels;
        const double b = m.tau_min + (m.tau_max - m.tau_min) * (i + 1) / panels;
        total += integrate(
            [&](double t) { return pdp(m, t) * std::pow(t, k); }, a, b, 1e-12);
    }
    return total;
}

/// Fixed-order panel quadrature for integrands containing the two-bounce
/// branch: that branch is itself computed by quadrature, and adaptive
/// refinement against its noise floor never terminates.
double pdp_moment_fixed(const PdpModel& m, int k) {
    double total = 0.0;
    const int panels = 64;
    for (int i = 0; i < panels; ++i) {
        const double a = m.tau_min + (m.tau_max - m.tau_min) * i / panels;
        const double b = m.tau_min + (m.tau_max - m.tau_min) * (i + 1) / panels;
        total += integrate_gl32(
            [&](double t) { return pdp(m, t) * std::pow(t, k); }, a, b);
    }
    return total;
}

}  // namespace

TEST_CASE("pdp_model: support ordering and weights") {
    const Scenario s = open_scenario();
    const PdpModel m = pdp_model(s);
    CHECK(m.tau_min > s.d / kSpeedOfLight);  // reflections arrive after LOS
    CHECK(m.tau_max > m.tau_min);
    CHECK(m.psi == doctest::Approx(0.0625));  // 0.25^2
    CHECK(m.lambda_b == doctest::Approx(s.lambda_b));
    Scenario u = s;
    u.orientation = OrientationModel::UniformOverPi;
    CHECK_THROWS_AS(pdp_model(u), scenario_error);
}

TEST_CASE("pdp: nonnegative over the support, zero beyond") {
    const Scenario s = open_scenario();
    const PdpModel m = pdp_model(s);
    for (int i = 0; i <= 200; ++i) {
        const double t = m.tau_min + (m.tau_max - m.tau_min) * i / 200.0;
        CHECK(pdp(m, t) >= 0.0);
    }
    CHECK(pdp(m, m.tau_max * 1.01) == 0.0);
}

TEST_CASE("arrival_density: domain guard below every mirror delay") {
    // the earliest conceivable arrival is the smallest face projection over
    // the propagation speed; any tau below all of them is outside the domain
    const Scenario s = open_scenario();
    CHECK_THROWS_AS(
        arrival_density(s, ReflectionOrder::First, s.d / kSpeedOfLight * 0.01),
        domain_error);
}

TEST_CASE("first-order profile mass equals the aggregate power") {
    Scenario s = open_scenario();
    s.second_order = false;
    const PdpModel m = pdp_model(s);
    const double mass = pdp_moment(m, 0);
    const double power = 1.0 / path_loss_exact(s);
    CHECK(mass == doctest::Approx(power).epsilon(1e-9));
}

TEST_CASE("delay_moments: zeroth closed bracket equals closed aggregate power") {
    Scenario s = open_scenario();
    s.second_order = false;
    const auto mom = delay_moments(s);
    CHECK(mom[0] ==
          doctest::Approx(1.0 / path_loss_closed(s)).epsilon(1e-9));
}

TEST_CASE("delay_moments: brackets track the pointwise profile") {
    // the brackets linearize the blockage term; the profile keeps it exact,
    // so the two agree only to the linearization's accuracy
    const Scenario s = open_scenario();
    const PdpModel m = pdp_model(s);
    const auto mom = delay_moments(s);
    for (int k = 0; k <= 2; ++k) {
        const double direct = pdp_moment_fixed(m, k);
        CHECK(std::abs(direct - mom[k]) / mom[k] < 0.05);
    }
}

TEST_CASE("delay_stats: definitions and identities") {
    const Scenario s = open_scenario();
    const auto ds = delay_stats(s);
    const auto mom = delay_moments(s);
    CHECK(ds.tau_mean == doctest::Approx(mom[1] / mom[0]).epsilon(1e-12));
    CHECK(ds.tau_rms >= 0.0);
    CHECK(ds.b_c == doctest::Approx(1.0 / (50.0 * ds.tau_rms)).epsilon(1e-12));
    const PdpModel m = pdp_model(s);
    CHECK(ds.tau_mean >= m.tau_min);
    CHECK(ds.tau_mean <= m.tau_max);
    // no coupling -> no mass -> domain error
    const Scenario dflt;
    CHECK_THROWS_AS(delay_stats(dflt), domain_error);
}

TEST_CASE("delay_stats: nonnegative spread over random scenarios") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ur(0.0, 90.0);
    std::uniform_real_distribution<double> ut(90.0, 180.0);
    std::uniform_real_distribution<double> ub(5.0, 40.0);
    int evaluated = 0;
    for (int i = 0; i < 200; ++i) {
        Scenario s = open_scenario();
        s.phi_r = deg2rad(ur(rng));
        s.phi_t = deg2rad(ut(rng));
        s.theta_bt = s.theta_br = deg2rad(ub(rng));
        try {
            const auto ds = delay_stats(s);
            CHECK(ds.tau_rms >= 0.0);
            CHECK(std::isfinite(ds.tau_rms));
            ++evaluated;
        } catch (const domain_error&) {
            // scenarios without coupling are acceptable draws
        }
    }
    CHECK(evaluated > 50);
}

TEST_CASE("pdp_curve: resolution and span") {
    const Scenario s = open_scenario();
    const auto curve = pdp_curve(s);
    REQUIRE(curve.size() > 10);
    const PdpModel m = pdp_model(s);
    CHECK(curve.front().first <= 0.9 * m.tau_min * 1.0000001);
    // the last sample may fall one grid spacing short of the nominal end
    CHECK(curve.back().first >= 1.1 * m.tau_max - 1.000001e-10);
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].first - curve[i - 1].first ==
              doctest::Approx(1e-10).epsilon(1e-6));
}

TEST_CASE("uniform orientation delay stats average the fixed ones") {
    Scenario s = open_scenario();
    s.orientation = OrientationModel::UniformOverPi;
    // single-bounce branch only: the orientation average of the two-bounce
    // bracket terms refines across every window kink and takes minutes
    s.second_order = false;
    const auto ds = delay_stats(s);
    CHECK(ds.tau_rms > 0.0);
    CHECK(std::isfinite(ds.b_c));
}
