#pragma once

#include <cmath>

namespace mmgeo {

/// 2-D vector / point in the horizontal propagation plane. Units are metres
/// unless a caller says otherwise; angles are radians everywhere.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

using Point2 = Vec2;

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
constexpr Vec2 operator/(Vec2 v, double s) { return {v.x / s, v.y / s}; }
constexpr Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 3-D cross product; positive when b is counter-clockwise
/// from a.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

constexpr double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

inline Vec2 normalized(Vec2 v) {
    const double n = norm(v);
    return {v.x / n, v.y / n};
}

/// Rotate v counter-clockwise by `ang` radians.
inline Vec2 rotated(Vec2 v, double ang) {
    const double c = std::cos(ang), s = std::sin(ang);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Unit vector at CCW angle `ang` from +x.
inline Vec2 unit_at(double ang) { return {std::cos(ang), std::sin(ang)}; }

/// CCW bearing of the ray from `from` towards `to`, in (-pi, pi].
inline double bearing(Vec2 from, Vec2 to) {
    return std::atan2(to.y - from.y, to.x - from.x);
}

inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

}  // namespace mmgeo
