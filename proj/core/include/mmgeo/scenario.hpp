#pragma once

#include <cmath>
#include <optional>

namespace mmgeo {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

constexpr double deg2rad(double deg) { return deg * M_PI / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / M_PI; }

/// How building orientations are distributed across the scene.
enum class OrientationModel {
    Fixed,         ///< every building at the same phi_b
    UniformOverPi  ///< phi_b ~ U[0, pi) independently per building
};

/// Which blockage-area expression feeds the blocking probability.
enum class BlockageVariant {
    General,                 ///< orientation-averaged rectangle area
    FixedOrientationApprox,  ///< aligned-strip approximation
};

/// Variant of the image-transmitter upper-edge formula (see second_order.hpp).
enum class UpperEdgeVariant {
    Literal,      ///< arctan(theta + ratio) exactly as printed in the model
    TanCorrected  ///< arctan(tan(theta) + ratio)
};

/// First and second raw moments of the building side lengths.
struct BlockageMoments {
    double e_l = 25.0;
    double e_w = 25.0;
    double e_l2 = 625.0;
    double e_w2 = 625.0;
};

/// Full parameter set for one propagation scenario. Angles in radians,
/// lengths in metres, densities per square metre.
struct Scenario {
    double d = 50.0;    ///< Tx-Rx separation
    double f_c = 38e9;  ///< carrier frequency [Hz]
    double p_t = 1.0;   ///< transmit power [W] (0 dBW)

    double phi_t = deg2rad(110.0);  ///< transmitter pointing angle
    double phi_r = deg2rad(50.0);   ///< receiver pointing angle
    double theta_bt = deg2rad(10.0);  ///< transmitter HPBW
    double theta_br = deg2rad(10.0);  ///< receiver HPBW

    double lambda_b = 12e-5;  ///< building density
    BlockageMoments moments;

    OrientationModel orientation = OrientationModel::Fixed;
    double phi_b = deg2rad(15.0);  ///< building orientation when Fixed

    double lambda_h_raw = 20e-4;  ///< human density before thinning
    double w_h = 0.30;            ///< human disc diameter
    double p_self = 0.25;         ///< per-carried-node self-blockage survival
    int carried = 2;              ///< number of nodes carried by persons (i)

    double gamma_rm = std::pow(10.0, -19.1 / 10.0);  ///< max reflection coeff

    bool second_order = true;  ///< include the two-bounce branch in PDP/delay
    UpperEdgeVariant upper_edge = UpperEdgeVariant::Literal;
    /// When unset, General is used for UniformOverPi scenes and
    /// FixedOrientationApprox for Fixed scenes.
    std::optional<BlockageVariant> blockage_override;
};

/// Thinned human density lambda_h' * (1 - lambda_b E[l] E[w]).
/// Throws scenario_error when the thinning factor is not positive.
double lambda_h(const Scenario& s);

/// Self-blockage survival weight (P_self)^i (exactly 1 when i = 0).
double self_block_weight(const Scenario& s);

/// Friis factor (c / 4 pi f)^2.
double friis_factor(const Scenario& s);

/// Effective blockage variant after applying the default rule.
BlockageVariant blockage_variant(const Scenario& s);

/// Validates ranges and cross-field invariants; throws scenario_error with a
/// message naming the offending field.
void validate(const Scenario& s);

}  // namespace mmgeo
