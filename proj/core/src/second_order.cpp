#include "mmgeo/second_order.hpp"

#include <algorithm>
#include <cmath>

#include "mmgeo/errors.hpp"

namespace mmgeo {

namespace {
constexpr double kThetaUpperClamp = M_PI / 2.0 - 1e-3;
}

ImageSourceModel image_source_model(const Scenario& s, double phi_face,
                                    FaceDim dim) {
    ImageSourceModel m;
    m.phi_face = phi_face;
    m.a = dim == FaceDim::Length ? s.moments.e_l : s.moments.e_w;
    // Perpendicular extent by the face-angle threshold rule.
    const double phi_mod = std::fmod(phi_face, M_PI);
    m.a_prime = (phi_mod >= 0.0 && phi_mod <= M_PI / 2.0) ? s.moments.e_w
                                                          : s.moments.e_l;

    const AngleSet as = angle_set(s, phi_face);
    m.theta_tif = as.theta_ti;
    m.theta_tuf = as.theta_tu;
    if (m.theta_tif > kThetaUpperClamp) {
        m.theta_tif = kThetaUpperClamp;
        m.clamped = true;
    }
    if (!(m.theta_tuf > 0.0) || !(m.theta_tuf < m.theta_tif)) {
        m.empty = true;  // no first-bounce gate
        return m;
    }

    const double cosf = std::abs(std::cos(phi_face));
    const double sinf = std::abs(std::sin(phi_face));
    m.d_max = 0.5 * s.d * (cosf * std::tan(m.theta_tif) + sinf) +
              m.a_prime / 2.0;
    m.support_lo = m.a_prime / 2.0;
    m.support_hi = m.d_max;
    if (!(m.d_max > m.support_lo)) {
        m.empty = true;
        return m;
    }
    m.c1 = (m.a / 2.0) * (std::sin(m.theta_tif) * std::tan(m.theta_tif) +
                          std::sin(m.theta_tuf) * std::tan(m.theta_tuf));
    m.c2 = (1.0 / std::tan(m.theta_tuf) - 1.0 / std::tan(m.theta_tif)) / 2.0;
    m.area = m.c1 * (m.d_max - m.support_lo) +
             m.c2 * (m.d_max * m.d_max - m.support_lo * m.support_lo);
    if (!(m.area > 0.0)) {
        m.empty = true;
        return m;
    }
    m.p = 1.0 - std::exp(-s.lambda_b * m.area);
    m.empty = false;
    return m;
}

double image_distance_pdf(const ImageSourceModel& m, double dhat) {
    if (m.empty || dhat < m.support_lo || dhat > m.support_hi) return 0.0;
    return (m.c1 + 2.0 * m.c2 * dhat) / m.area;
}

double image_distance_cdf(const ImageSourceModel& m, double dhat) {
    if (m.empty || dhat <= m.support_lo) return 0.0;
    if (dhat >= m.support_hi) return 1.0;
    return (m.c1 * (dhat - m.support_lo) +
            m.c2 * (dhat * dhat - m.support_lo * m.support_lo)) /
           m.area;
}

ImageAnglePdf image_angle_pdf(const ImageSourceModel& m, double dhat) {
    if (m.empty)
        throw scenario_error("image_angle_pdf: empty image-source model");
    const double h = dhat - m.a_prime / 2.0;
    if (!(h > 0.0))
        throw scenario_error(
            "image_angle_pdf: degenerate denominator (dhat at or below a'/2)");
    ImageAnglePdf pdf;
    pdf.lo = M_PI / 2.0 - m.theta_tif;
    pdf.hi = M_PI / 2.0 - m.theta_tuf;
    const double cot_ti = 1.0 / std::tan(m.theta_tif);
    const double cot_tu = 1.0 / std::tan(m.theta_tuf);
    const double tan_li = cot_ti - m.a / h;
    pdf.theta_li = std::atan(tan_li);
    pdf.denom = cot_tu - tan_li;
    if (!(pdf.denom > 0.0) || !std::isfinite(pdf.denom))
        throw scenario_error("image_angle_pdf: degenerate denominator");
    pdf.atom_angle = pdf.lo;
    pdf.atom_mass = (cot_ti - tan_li) / pdf.denom;
    return pdf;
}

double image_angle_density(const ImageAnglePdf& pdf, double theta_hat) {
    if (theta_hat < pdf.lo || theta_hat > pdf.hi) return 0.0;
    const double sec = 1.0 / std::cos(theta_hat);
    return sec * sec / pdf.denom;
}

double image_upper_edge(const ImageSourceModel& m, double theta_hat_ti,
                        double dhat, UpperEdgeVariant variant) {
    const double h = dhat - m.a_prime / 2.0;
    if (!(h > 0.0))
        throw scenario_error("image_upper_edge: dhat at or below a'/2");
    const double ratio = m.a / h;
    if (variant == UpperEdgeVariant::Literal) {
        const double raw = std::atan(theta_hat_ti + ratio);
        return std::min(raw, m.theta_tuf);
    }
    const double raw = std::atan(std::tan(theta_hat_ti) + ratio);
    return std::min(raw, M_PI / 2.0 - m.theta_tuf);
}

bool image_support_contains(const ImageSourceModel& m, double dhat,
                            double theta_hat) {
    if (m.empty) return false;
    if (dhat < m.support_lo - 1e-12 || dhat > m.support_hi + 1e-12)
        return false;
    const ImageAnglePdf pdf = image_angle_pdf(m, std::max(dhat, m.support_lo +
                                                                    1e-12));
    // Continuous support plus the atom; below the atom nothing exists, and
    // the conditional lower edge never falls below theta_li.
    const double lo_eff = std::max(pdf.lo, pdf.theta_li);
    return theta_hat >= lo_eff - 1e-9 && theta_hat <= pdf.hi + 1e-9;
}

bool image_region_contains(const ImageSourceModel& m, Point2 tx,
                           Point2 center) {
    if (m.empty) return false;
    const Vec2 u = unit_at(m.phi_face);
    const Vec2 n{-u.y, u.x};
    const Vec2 r = center - tx;
    const double dhat = dot(r, n);
    if (dhat < m.support_lo || dhat > m.support_hi) return false;
    const double h = dhat - m.a_prime / 2.0;
    const double x = dot(r, u);
    const double x_lo = h / std::tan(m.theta_tif) - m.a;
    const double width = m.c1 + 2.0 * m.c2 * dhat;
    return x >= x_lo && x <= x_lo + width;
}

}  // namespace mmgeo
