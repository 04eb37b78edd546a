#pragma once

#include <optional>

#include "mmgeo/geometry.hpp"
#include "mmgeo/scenario.hpp"

namespace mmgeo {

/// Angular gates of the two antenna lobes expressed in the rotated frame of a
/// reflecting face: a path with arrival angle theta_n couples the receiver
/// when theta_n is in [theta_ri, theta_ru] and the transmitter when
/// theta_n is in [theta_tu, theta_ti]. theta_ra / theta_ta are the lobe axes.
struct AngleSet {
    double theta_ri = 0.0;
    double theta_ru = 0.0;
    double theta_ti = 0.0;
    double theta_tu = 0.0;
    double theta_ra = 0.0;
    double theta_ta = 0.0;
    double phi_face = 0.0;  ///< face angle the set was evaluated at
};

AngleSet angle_set(double phi_t, double phi_r, double phi_face,
                   double theta_bt, double theta_br);

/// Convenience overload pulling pointing/beam parameters from the scenario.
AngleSet angle_set(const Scenario& s, double phi_face);

/// Which of the two geometric couplings produced the window: One when the
/// transmitter axis sits above the receiver axis (theta_ta > theta_ra),
/// Two otherwise.
enum class CouplingScenario { One, Two };

struct CouplingWindow {
    double theta_i = 0.0;
    double theta_u = 0.0;
    CouplingScenario tag = CouplingScenario::One;
    FaceDim face_dim = FaceDim::Length;
    double phi_face = 0.0;
    bool clamped = false;  ///< theta_u hit the pi/2 guard
};

/// Arrival-angle window over which both main lobes couple:
/// [max(theta_ri, theta_tu), min(theta_ru, theta_ti)], absent when empty.
/// theta_u is clamped just below pi/2 (clamped flag set); a negative lower
/// edge is clamped to 0 (no reflector below the Tx-Rx axis).
std::optional<CouplingWindow> coupling_window(const AngleSet& as,
                                              FaceDim dim = FaceDim::Length);

/// Area of the feasible region for reflector centres:
/// a * (d |cos phi_b| / 2) * (tan theta_u - tan theta_i).
/// Throws scenario_error when theta_u >= pi/2 (unbounded window).
double feasible_area(double a, double d, double phi_b,
                     const CouplingWindow& window);

/// Elemental feasible area dA = (d |cos phi_b| / 2) sec^2(theta_n) dtheta da.
double elemental_area(double d, double phi_b, double theta_n, double dtheta,
                      double da);

/// Orientation-averaged blockage area of one rectangular blocker against a
/// reflected path of arrival angle theta_n (buildings only, no humans).
double block_area_buildings(double d, double phi_b, double theta_n,
                            const BlockageMoments& m);

/// Probability that a first-order path at arrival angle theta_n is blocked,
/// combining buildings, thinned pedestrians, and self-blockage.
double p_block(double d, double phi_b, double theta_n, const Scenario& s,
               BlockageVariant variant);

/// Average number of first-order reflection components. Quadrature-exact:
/// integrates the survival probability over the coupling window (and over
/// the face angle for UniformOverPi scenes). Both face families contribute.
double avg_first_order_exact(const Scenario& s);

/// Linearized closed form of the same count. For UniformOverPi scenes the
/// closed fixed-orientation expression is averaged over the face angle.
double avg_first_order_closed(const Scenario& s);

/// Directional path loss (linear power ratio, gain- and P_t-normalized).
/// Returns +infinity when no coupling window exists.
double path_loss_exact(const Scenario& s);
double path_loss_closed(const Scenario& s);

/// == internal-ish helpers shared with the pdp module ==

/// One reflecting face family: faces at angle phi_face whose reflecting side
/// has mean extent a_mean. Fixed scenes have two (phi_b with E[l],
/// phi_b + pi/2 with E[w]).
struct FaceFamily {
    double phi_face = 0.0;
    FaceDim dim = FaceDim::Length;
    double a_mean = 0.0;
};

/// The two face families of a scenario.
std::array<FaceFamily, 2> face_families(const Scenario& s, double phi_b);

/// Exponent G(theta) >= 0 with survival = exp(-G(theta)) (self-blockage
/// excluded) for a path at arrival angle theta off a family's face.
double blockage_exponent(const Scenario& s, const FaceFamily& fam,
                         double theta_n, BlockageVariant variant);

/// Closed-form composites of the linearized survival model for one family.
struct Composites {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double u0 = 0.0;
    double xbar = 0.0;
    double g0 = 0.0;  ///< exp argument: -(x u0 + y + z sqrt(1+u0^2))
};

Composites composites(const Scenario& s, const FaceFamily& fam,
                      const CouplingWindow& win);

/// Face-angle interval outside which no coupling window exists (uniform
/// orientation integrals run over its intersection with [0, pi));
/// first = phi_i1, second = phi_u1 (scenario switch), third = phi_u2.
struct OrientationLimits {
    double phi_i1 = 0.0;
    double phi_u1 = 0.0;
    double phi_u2 = 0.0;
};
OrientationLimits orientation_limits(const Scenario& s);

}  // namespace mmgeo
