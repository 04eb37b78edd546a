#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "mmgeo/vec2.hpp"

namespace mmgeo {

struct Segment2 {
    Point2 a;
    Point2 b;
};

/// Axis convention: `l` extends along the direction at angle `phi_b` from +x,
/// `w` along the perpendicular. phi_b is normalised to [0, pi) by the scene
/// generator; the geometry below works for any value.
struct Building {
    Point2 center;
    double l = 0.0;    ///< side length along the orientation axis [m]
    double w = 0.0;    ///< side length across the orientation axis [m]
    double phi_b = 0.0;  ///< orientation of the l-axis, radians CCW from +x
};

/// Pedestrian blocker: an opaque disc of diameter w_h.
struct Person {
    Point2 center;
    double w_h = 0.0;  ///< disc diameter [m]
};

/// Closed circular-sector antenna main lobe.
struct Cone {
    Point2 apex;
    double boresight = 0.0;   ///< CCW bearing of the lobe axis from +x
    double half_angle = 0.0;  ///< half of the lobe opening angle
};

/// Which side pair of a building a face belongs to.
enum class FaceDim { Length, Width };

struct BuildingFace {
    Segment2 seg;
    FaceDim dim = FaceDim::Length;
};

/// The four faces of a building. Faces 0,1 run along the l-axis (they have
/// length l and carry FaceDim::Length); faces 2,3 are the w sides.
std::array<BuildingFace, 4> building_faces(const Building& b);

/// Closed-rectangle point containment.
bool building_contains(const Building& b, Point2 p);

/// Mirror image of p across the infinite line through `face`.
/// Throws geometry_error if the face is degenerate (length < eps).
Point2 image_point(Point2 p, const Segment2& face, double eps = 1e-12);

/// Specular reflection point plus the sine of the grazing angle between the
/// reflected ray and the face.
struct RayVertex {
    Point2 point;
    double sin_theta = 0.0;
};

/// One-bounce specular construction: the unique point R on the closed face
/// segment with angle of incidence = angle of reflection for tx -> R -> rx.
///
/// Returns nullopt when no such point exists (tx and rx on strictly opposite
/// sides of the face line, or the mirror ray misses the finite segment).
/// Throws geometry_error when tx or rx lies on the face's supporting line or
/// the face is degenerate.
std::optional<RayVertex> specular_reflection(Point2 tx, Point2 rx,
                                             const Segment2& face,
                                             double eps = 1e-12);

/// True when segment s intersects the open interior of any building (other
/// than the excluded one) or passes strictly within w_h/2 of a person's
/// centre. Touching a boundary exactly is not blockage.
bool segment_blocked(const Segment2& s, std::span<const Building> buildings,
                     std::span<const Person> persons,
                     std::optional<std::size_t> exclude_building = std::nullopt);

/// As above with up to two excluded buildings (both bounce faces of a
/// two-reflection path).
bool segment_blocked2(const Segment2& s, std::span<const Building> buildings,
                      std::span<const Person> persons,
                      std::optional<std::size_t> exclude_a,
                      std::optional<std::size_t> exclude_b);

/// Closed main-lobe test, wrap-around safe (boresight may be any angle, the
/// lobe may straddle the -pi/+pi cut). Boundary directions count as inside.
/// Throws geometry_error when target coincides with the apex.
bool in_main_lobe(const Cone& cone, Point2 target);

/// Shortest distance from point p to the closed segment s.
double point_segment_distance(Point2 p, const Segment2& s);

}  // namespace mmgeo
