#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "mmgeo/first_order.hpp"
#include "mmgeo/second_order.hpp"

namespace mmgeo {

enum class ReflectionOrder { First, Second };

struct DelayStats {
    double tau_mean = 0.0;  ///< seconds
    double tau_rms = 0.0;   ///< seconds
    double b_c = 0.0;       ///< coherence bandwidth 1/(50 tau_rms) [Hz]
};

/// Precomputed per-scenario state for PDP evaluation: one branch pair
/// (first-order window + image-source mixture) per face family.
struct PdpModel {
    struct Family {
        FaceFamily fam;
        double proj = 0.0;  ///< d |cos phi_face|
        std::optional<CouplingWindow> window;
        Composites comp;  ///< valid when window is present
        double tau_if = 0.0;
        double tau_uf = 0.0;
        double theta_ri = 0.0;  ///< receiver gate for the second bounce
        double theta_ru = 0.0;
        ImageSourceModel image;
    };
    std::array<Family, 2> families;
    double gamma_l = 0.0;
    double gamma_rm = 0.0;
    double psi = 1.0;
    double lambda_b = 0.0;
    bool second_order = true;
    UpperEdgeVariant upper_edge = UpperEdgeVariant::Literal;
    double tau_min = 0.0;  ///< earliest support over active branches
    double tau_max = 0.0;  ///< latest support
};

/// Requires a Fixed-orientation scenario (the profile is defined per face
/// angle); throws scenario_error otherwise.
PdpModel pdp_model(const Scenario& s);

/// Density (1/s) of order-j arrivals at delay tau. Zero outside the order's
/// support; throws domain_error for tau below the mirror delay
/// d |cos phi_face| / c of every family.
double arrival_density(const Scenario& s, ReflectionOrder j, double tau);

/// Normalized power delay profile (antenna gains and P_t divided out), W/s.
double pdp(const Scenario& s, double tau);
double pdp(const PdpModel& m, double tau);

/// Mean delay, RMS delay spread and coherence bandwidth from the closed-form
/// moment integrals. UniformOverPi scenarios average the moments over the
/// face angle. Throws domain_error when the total PDP mass is zero.
DelayStats delay_stats(const Scenario& s);

/// Sampled curve on a 0.1 ns grid spanning [0.9 tau_min, 1.1 tau_max].
std::vector<std::pair<double, double>> pdp_curve(const Scenario& s);

/// The three delay moments [M0, M1, M2] = [integral PDP, integral tau PDP,
/// integral tau^2 PDP] via the closed forms; exposed for cross-checks.
std::array<double, 3> delay_moments(const Scenario& s);

}  // namespace mmgeo
