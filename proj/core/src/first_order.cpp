#include "mmgeo/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmgeo/errors.hpp"
#include "mmgeo/quadrature.hpp"

namespace mmgeo {

namespace {
// Upper clamp: tan(theta_u) must stay finite (the window degenerates into an
// infinite propagation distance at pi/2).
constexpr double kThetaUpperClamp = M_PI / 2.0 - 1e-3;
// Windows narrower than this carry no meaningful mass; reporting them as
// absent keeps downstream moment ratios away from pure cancellation noise.
constexpr double kMinWindowWidth = 1e-9;
}  // namespace

AngleSet angle_set(double phi_t, double phi_r, double phi_face,
                   double theta_bt, double theta_br) {
    AngleSet as;
    as.theta_ri = phi_r + phi_face - theta_br / 2.0;
    as.theta_ru = phi_r + phi_face + theta_br / 2.0;
    as.theta_ti = M_PI - (phi_t + phi_face - theta_bt / 2.0);
    as.theta_tu = M_PI - (phi_t + phi_face + theta_bt / 2.0);
    as.theta_ra = phi_r + phi_face;
    as.theta_ta = M_PI - (phi_t + phi_face);
    as.phi_face = phi_face;
    return as;
}

AngleSet angle_set(const Scenario& s, double phi_face) {
    return angle_set(s.phi_t, s.phi_r, phi_face, s.theta_bt, s.theta_br);
}

std::optional<CouplingWindow> coupling_window(const AngleSet& as, FaceDim dim) {
    CouplingWindow w;
    w.theta_i = std::max(as.theta_ri, as.theta_tu);
    w.theta_u = std::min(as.theta_ru, as.theta_ti);
    w.tag = as.theta_ta > as.theta_ra ? CouplingScenario::One
                                      : CouplingScenario::Two;
    w.face_dim = dim;
    w.phi_face = as.phi_face;
    if (w.theta_i < 0.0) w.theta_i = 0.0;
    if (w.theta_u > kThetaUpperClamp) {
        w.theta_u = kThetaUpperClamp;
        w.clamped = true;
    }
    if (!(w.theta_i + kMinWindowWidth < w.theta_u)) return std::nullopt;
    return w;
}

double feasible_area(double a, double d, double phi_b,
                     const CouplingWindow& window) {
    if (window.theta_u >= M_PI / 2.0)
        throw scenario_error("feasible_area: unbounded window (theta_u >= pi/2)");
    const double proj = d * std::abs(std::cos(phi_b));
    return a * (proj / 2.0) *
           (std::tan(window.theta_u) - std::tan(window.theta_i));
}

double elemental_area(double d, double phi_b, double theta_n, double dtheta,
                      double da) {
    const double sec = 1.0 / std::cos(theta_n);
    return (d * std::abs(std::cos(phi_b)) / 2.0) * sec * sec * dtheta * da;
}

double block_area_buildings(double d, double phi_b, double theta_n,
                            const BlockageMoments& m) {
    const double proj = d * std::abs(std::cos(phi_b));
    const double sec = 1.0 / std::cos(theta_n);
    const double first = proj * sec * (2.0 / M_PI) * (m.e_l + m.e_w);
    const double second = m.e_w * m.e_l;
    const double corner =
        (2.0 - (std::cos(theta_n) + std::sin(theta_n))) / (2.0 * M_PI);
    return first + second - corner * (m.e_w2 + m.e_l2);
}

std::array<FaceFamily, 2> face_families(const Scenario& s, double phi_b) {
    return {FaceFamily{phi_b, FaceDim::Length, s.moments.e_l},
            FaceFamily{phi_b + M_PI / 2.0, FaceDim::Width, s.moments.e_w}};
}

double blockage_exponent(const Scenario& s, const FaceFamily& fam,
                         double theta_n, BlockageVariant variant) {
    const double proj = s.d * std::abs(std::cos(fam.phi_face));
    const double sec = 1.0 / std::cos(theta_n);
    const double lam_h = s.lambda_h_raw > 0.0 ? lambda_h(s) : 0.0;
    const double human = lam_h * s.w_h * proj * sec;
    if (variant == BlockageVariant::General)
        return s.lambda_b * block_area_buildings(s.d, fam.phi_face, theta_n,
                                                 s.moments) +
               human;
    // Aligned-strip approximation. The moment on the tangent term is the one
    // parallel to the reflecting face; for the width family the roles swap.
    const double m_tan =
        fam.dim == FaceDim::Length ? s.moments.e_l : s.moments.e_w;
    const double m_const =
        fam.dim == FaceDim::Length ? s.moments.e_w : s.moments.e_l;
    const double buildings =
        s.lambda_b * (proj * (m_tan * std::tan(theta_n) + m_const) +
                      s.moments.e_l * s.moments.e_w);
    return buildings + human;
}

double p_block(double d, double phi_b, double theta_n, const Scenario& s,
               BlockageVariant variant) {
    Scenario local = s;
    local.d = d;
    const FaceFamily fam{phi_b, FaceDim::Length, s.moments.e_l};
    const double expo = blockage_exponent(local, fam, theta_n, variant);
    return 1.0 - self_block_weight(s) * std::exp(-expo);
}

Composites composites(const Scenario& s, const FaceFamily& fam,
                      const CouplingWindow& win) {
    Composites c;
    const double proj = s.d * std::abs(std::cos(fam.phi_face));
    const double m_tan =
        fam.dim == FaceDim::Length ? s.moments.e_l : s.moments.e_w;
    const double m_const =
        fam.dim == FaceDim::Length ? s.moments.e_w : s.moments.e_l;
    const double lam_h = s.lambda_h_raw > 0.0 ? lambda_h(s) : 0.0;
    c.x = s.lambda_b * proj * m_tan;
    c.y = s.lambda_b * (proj * m_const + s.moments.e_l * s.moments.e_w);
    c.z = lam_h * s.w_h * proj;
    c.u0 = (std::tan(win.theta_i) + std::tan(win.theta_u)) / 2.0;
    c.xbar = c.x + 2.0 * c.u0 * c.z / std::sqrt(1.0 + c.u0 * c.u0);
    c.g0 = -(c.x * c.u0 + c.y + c.z * std::sqrt(1.0 + c.u0 * c.u0));
    return c;
}

OrientationLimits orientation_limits(const Scenario& s) {
    const double theta_avg = (s.theta_bt + s.theta_br) / 2.0;
    OrientationLimits lim;
    lim.phi_i1 = (M_PI - s.phi_t - s.phi_r - theta_avg) / 2.0;
    lim.phi_u1 = (M_PI - s.phi_t - s.phi_r) / 2.0;
    lim.phi_u2 = (M_PI - s.phi_t - s.phi_r + theta_avg) / 2.0;
    return lim;
}

namespace {

// Average count contribution of one face family at a fixed face angle.
double count_family(const Scenario& s, const FaceFamily& fam,
                    BlockageVariant variant) {
    const auto win = coupling_window(angle_set(s, fam.phi_face), fam.dim);
    if (!win) return 0.0;
    const double proj = s.d * std::abs(std::cos(fam.phi_face));
    if (proj <= 0.0) return 0.0;
    const double integral = integrate(
        [&](double theta) {
            const double sec = 1.0 / std::cos(theta);
            return std::exp(-blockage_exponent(s, fam, theta, variant)) * sec *
                   sec;
        },
        win->theta_i, win->theta_u);
    return s.lambda_b * self_block_weight(s) * fam.a_mean * (proj / 2.0) *
           integral;
}

double count_family_closed(const Scenario& s, const FaceFamily& fam) {
    const auto win = coupling_window(angle_set(s, fam.phi_face), fam.dim);
    if (!win) return 0.0;
    const double proj = s.d * std::abs(std::cos(fam.phi_face));
    if (proj <= 0.0) return 0.0;
    const Composites c = composites(s, fam, *win);
    const double ti = std::tan(win->theta_i), tu = std::tan(win->theta_u);
    const double bracket = (1.0 + c.xbar * c.u0) * (tu - ti) -
                           (c.xbar / 2.0) * (tu * tu - ti * ti);
    return s.lambda_b * self_block_weight(s) * fam.a_mean * (proj / 2.0) *
           std::exp(c.g0) * bracket;
}

// Reciprocal path loss contribution of one family at a fixed face angle.
double inv_pl_family(const Scenario& s, const FaceFamily& fam,
                     BlockageVariant variant) {
    const auto win = coupling_window(angle_set(s, fam.phi_face), fam.dim);
    if (!win) return 0.0;
    const double proj = s.d * std::abs(std::cos(fam.phi_face));
    if (proj <= 0.0) return 0.0;
    const double integral = integrate(
        [&](double theta) {
            return std::sin(theta) *
                   std::exp(-blockage_exponent(s, fam, theta, variant));
        },
        win->theta_i, win->theta_u);
    return friis_factor(s) * s.gamma_rm * s.lambda_b * self_block_weight(s) *
           fam.a_mean / (2.0 * proj) * integral;
}

double inv_pl_family_closed(const Scenario& s, const FaceFamily& fam) {
    const auto win = coupling_window(angle_set(s, fam.phi_face), fam.dim);
    if (!win) return 0.0;
    const double proj = s.d * std::abs(std::cos(fam.phi_face));
    if (proj <= 0.0) return 0.0;
    const Composites c = composites(s, fam, *win);
    const double ti = std::tan(win->theta_i), tu = std::tan(win->theta_u);
    const double si = 1.0 / std::cos(win->theta_i),
                 su = 1.0 / std::cos(win->theta_u);
    const double bracket =
        (1.0 + c.xbar * c.u0) *
            (std::cos(win->theta_i) - std::cos(win->theta_u)) +
        c.xbar * (std::log((ti + si) / (tu + su)) + std::sin(win->theta_u) -
                  std::sin(win->theta_i));
    return friis_factor(s) * s.gamma_rm * s.lambda_b * self_block_weight(s) *
           fam.a_mean / (2.0 * proj) * std::exp(c.g0) * bracket;
}

// Integrate a per-face-angle contribution over the uniform orientation
// range, splitting at the scenario switch angle for smoother panels.
template <class PerAngle>
double orientation_average(const Scenario& s, PerAngle&& per_angle) {
    const OrientationLimits lim = orientation_limits(s);
    const double lo = std::max(lim.phi_i1, 0.0);
    const double hi = std::min(lim.phi_u2, M_PI);
    if (!(lo < hi)) return 0.0;
    const double mid = std::clamp(lim.phi_u1, lo, hi);
    double total = 0.0;
    if (mid > lo) total += integrate(per_angle, lo, mid, 1e-12);
    if (hi > mid) total += integrate(per_angle, mid, hi, 1e-12);
    return total / M_PI;
}

}  // namespace

double avg_first_order_exact(const Scenario& s) {
    const BlockageVariant variant = blockage_variant(s);
    if (s.orientation == OrientationModel::Fixed) {
        double total = 0.0;
        for (const FaceFamily& fam : face_families(s, s.phi_b))
            total += count_family(s, fam, variant);
        return total;
    }
    return orientation_average(s, [&](double phi) {
        double total = 0.0;
        for (const FaceFamily& fam : face_families(s, 0.0)) {
            FaceFamily shifted = fam;
            shifted.phi_face = phi;  // both families sweep the same range
            total += count_family(s, shifted, variant);
        }
        return total;
    });
}

double avg_first_order_closed(const Scenario& s) {
    if (s.orientation == OrientationModel::Fixed) {
        double total = 0.0;
        for (const FaceFamily& fam : face_families(s, s.phi_b))
            total += count_family_closed(s, fam);
        return total;
    }
    return orientation_average(s, [&](double phi) {
        double total = 0.0;
        for (const FaceFamily& fam : face_families(s, 0.0)) {
            FaceFamily shifted = fam;
            shifted.phi_face = phi;
            total += count_family_closed(s, shifted);
        }
        return total;
    });
}

double path_loss_exact(const Scenario& s) {
    const BlockageVariant variant = blockage_variant(s);
    double inv = 0.0;
    if (s.orientation == OrientationModel::Fixed) {
        for (const FaceFamily& fam : face_families(s, s.phi_b))
            inv += inv_pl_family(s, fam, variant);
    } else {
        inv = orientation_average(s, [&](double phi) {
            double total = 0.0;
            for (const FaceFamily& fam : face_families(s, 0.0)) {
                FaceFamily shifted = fam;
                shifted.phi_face = phi;
                total += inv_pl_family(s, shifted, variant);
            }
            return total;
        });
    }
    if (inv <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / inv;
}

double path_loss_closed(const Scenario& s) {
    double inv = 0.0;
    if (s.orientation == OrientationModel::Fixed) {
        for (const FaceFamily& fam : face_families(s, s.phi_b))
            inv += inv_pl_family_closed(s, fam);
    } else {
        inv = orientation_average(s, [&](double phi) {
            double total = 0.0;
            for (const FaceFamily& fam : face_families(s, 0.0)) {
                FaceFamily shifted = fam;
                shifted.phi_face = phi;
                total += inv_pl_family_closed(s, shifted);
            }
            return total;
        });
    }
    if (inv <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / inv;
}

}  // namespace mmgeo
