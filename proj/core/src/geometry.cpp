#include "mmgeo/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mmgeo/errors.hpp"

namespace mmgeo {

std::array<BuildingFace, 4> building_faces(const Building& b) {
    const Vec2 u = unit_at(b.phi_b);          // along l
    const Vec2 v = {-u.y, u.x};               // along w
    const Vec2 hl = (b.l / 2.0) * u;
    const Vec2 hw = (b.w / 2.0) * v;
    const Point2 c00 = b.center - hl - hw;
    const Point2 c10 = b.center + hl - hw;
    const Point2 c11 = b.center + hl + hw;
    const Point2 c01 = b.center - hl + hw;
    return {BuildingFace{{c00, c10}, FaceDim::Length},
            BuildingFace{{c01, c11}, FaceDim::Length},
            BuildingFace{{c00, c01}, FaceDim::Width},
            BuildingFace{{c10, c11}, FaceDim::Width}};
}

bool building_contains(const Building& b, Point2 p) {
    const Vec2 u = unit_at(b.phi_b);
    const Vec2 r = p - b.center;
    const double du = dot(r, u);
    const double dv = cross(u, r);  // component along the w axis
    return std::abs(du) <= b.l / 2.0 && std::abs(dv) <= b.w / 2.0;
}

Point2 image_point(Point2 p, const Segment2& face, double eps) {
    const Vec2 d = face.b - face.a;
    const double len = norm(d);
    if (!(len > eps)) throw geometry_error("image_point: degenerate face");
    const Vec2 u = d / len;
    const Vec2 r = p - face.a;
    const double along = dot(r, u);
    const double off = cross(u, r);  // signed distance to the line
    // Reflect the perpendicular component.
    return face.a + along * u + off * Vec2{u.y, -u.x};
}

std::optional<RayVertex> specular_reflection(Point2 tx, Point2 rx,
                                             const Segment2& face, double eps) {
    const Vec2 d = face.b - face.a;
    const double len = norm(d);
    if (!(len > eps)) throw geometry_error("specular_reflection: degenerate face");
    const Vec2 u = d / len;

    const double off_t = cross(u, tx - face.a);
    const double off_r = cross(u, rx - face.a);
    // Signed distances to the supporting line; a source on the line has no
    // well-defined reflection.
    if (std::abs(off_t) <= eps * (1.0 + norm(tx - face.a)))
        throw geometry_error("specular_reflection: tx on the face line");
    if (std::abs(off_r) <= eps * (1.0 + norm(rx - face.a)))
        throw geometry_error("specular_reflection: rx on the face line");
    if ((off_t > 0.0) != (off_r > 0.0)) return std::nullopt;  // opposite sides

    const Point2 img = image_point(tx, face, eps);
    const Vec2 ray = rx - img;
    const double denom = cross(d, ray);
    if (std::abs(denom) <= eps * norm(ray) * len) return std::nullopt;
    // Solve face.a + t*d = img + s*ray for t (Cramer).
    const double t = cross(img - face.a, ray) / denom;
    if (t < -eps || t > 1.0 + eps) return std::nullopt;
    const double tc = std::clamp(t, 0.0, 1.0);
    const Point2 R = face.a + tc * d;
    const Vec2 out = rx - R;
    const double sin_theta = std::abs(cross(u, normalized(out)));
    return RayVertex{R, sin_theta};
}

namespace {

// Liang-Barsky style clip of segment s against the rectangle of b, in the
// rectangle's local frame. Returns the clipped parameter interval, empty if
// the segment misses the closed box.
struct ClipInterval {
    double t0 = 0.0, t1 = -1.0;
    bool hit = false;
};

ClipInterval clip_to_building(const Segment2& s, const Building& b) {
    const Vec2 u = unit_at(b.phi_b);
    const Vec2 p0 = s.a - b.center;
    const Vec2 dseg = s.b - s.a;
    // local coordinates
    const double px = dot(p0, u), py = cross(u, p0);
    const double dx = dot(dseg, u), dy = cross(u, dseg);
    const double hx = b.l / 2.0, hy = b.w / 2.0;

    double t0 = 0.0, t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {px + hx, hx - px, py + hy, hy - py};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return {};  // parallel and outside this slab
        } else {
            const double r = q[i] / p[i];
            if (p[i] < 0.0) {
                if (r > t1) return {};
                if (r > t0) t0 = r;
            } else {
                if (r < t0) return {};
                if (r < t1) t1 = r;
            }
        }
    }
    return {t0, t1, true};
}

bool building_blocks(const Segment2& s, const Building& b) {
    const ClipInterval ci = clip_to_building(s, b);
    if (!ci.hit) return false;
    // A grazing touch (point contact or sliding along a face) is not
    // blockage: require a clipped sub-segment of positive length whose
    // midpoint is strictly interior.
    if (ci.t1 - ci.t0 <= 1e-12) return false;
    const double tm = 0.5 * (ci.t0 + ci.t1);
    const Point2 mid = s.a + tm * (s.b - s.a);
    const Vec2 u = unit_at(b.phi_b);
    const Vec2 r = mid - b.center;
    const double du = std::abs(dot(r, u));
    const double dv = std::abs(cross(u, r));
    return du < b.l / 2.0 - 1e-12 && dv < b.w / 2.0 - 1e-12;
}

}  // namespace

double point_segment_distance(Point2 p, const Segment2& s) {
    const Vec2 d = s.b - s.a;
    const double l2 = norm2(d);
    if (l2 == 0.0) return distance(p, s.a);
    const double t = std::clamp(dot(p - s.a, d) / l2, 0.0, 1.0);
    return distance(p, s.a + t * d);
}

bool segment_blocked2(const Segment2& s, std::span<const Building> buildings,
                      std::span<const Person> persons,
                      std::optional<std::size_t> exclude_a,
                      std::optional<std::size_t> exclude_b) {
    for (std::size_t i = 0; i < buildings.size(); ++i) {
        if ((exclude_a && *exclude_a == i) || (exclude_b && *exclude_b == i))
            continue;
        const Building& b = buildings[i];
        // Cheap reject: bounding circle vs segment distance.
        const double rad = 0.5 * std::hypot(b.l, b.w);
        if (point_segment_distance(b.center, s) > rad) continue;
        if (building_blocks(s, b)) return true;
    }
    for (const Person& h : persons) {
        const double r = h.w_h / 2.0;
        if (point_segment_distance(h.center, s) < r - 1e-15) return true;
    }
    return false;
}

bool segment_blocked(const Segment2& s, std::span<const Building> buildings,
                     std::span<const Person> persons,
                     std::optional<std::size_t> exclude_building) {
    return segment_blocked2(s, buildings, persons, exclude_building,
                            std::nullopt);
}

bool in_main_lobe(const Cone& cone, Point2 target) {
    if (target.x == cone.apex.x && target.y == cone.apex.y)
        throw geometry_error("in_main_lobe: target coincides with apex");
    const double dir = bearing(cone.apex, target);
    // remainder() maps the difference into [-pi, pi), handling wrap-around.
    const double diff = std::remainder(dir - cone.boresight, 2.0 * M_PI);
    return std::abs(diff) <= cone.half_angle + 1e-12;
}

}  // namespace mmgeo
