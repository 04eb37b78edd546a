#include "mmgeo/pdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmgeo/errors.hpp"
#include "mmgeo/quadrature.hpp"

namespace mmgeo {

namespace {

// Linearization weights of the survival exponent about the midpoint slope u0
// of a window [ti, tu]: exp(-(x tan + y + z sec)) ~ e * (1 + xbar (u0 - tan)).
struct LinWeights {
    double u0 = 0.0;
    double xbar = 0.0;
    double e = 0.0;  ///< exp(g0)
};

LinWeights lin_weights(const Composites& c, double ti, double tu) {
    LinWeights lw;
    lw.u0 = (std::tan(ti) + std::tan(tu)) / 2.0;
    const double root = std::sqrt(1.0 + lw.u0 * lw.u0);
    lw.xbar = c.x + 2.0 * lw.u0 * c.z / root;
    lw.e = std::exp(-(c.x * lw.u0 + c.y + c.z * root));
    return lw;
}

// Antiderivative differences of the linearized moment integrands over
// [i, u]. First-order weights carry sec^2 from the elemental area; after the
// delay substitution the k-th moment integrand reduces to
// {sin, tan, sec tan}(theta) for k = 0, 1, 2 and to {sin^2, sin tan, tan^2}
// for the two-bounce branch.
double br1_m0(double i, double u, double u0, double xb) {
    const double ti = std::tan(i), tu = std::tan(u);
    const double si = 1.0 / std::cos(i), su = 1.0 / std::cos(u);
    return (1.0 + xb * u0) * (std::cos(i) - std::cos(u)) +
           xb * (std::log((ti + si) / (tu + su)) + std::sin(u) - std::sin(i));
}

double br1_m1(double i, double u, double u0, double xb) {
    return (1.0 + xb * u0) * std::log(std::cos(i) / std::cos(u)) -
           xb * (std::tan(u) - std::tan(i) + i - u);
}

double br1_m2(double i, double u, double u0, double xb) {
    const double ti = std::tan(i), tu = std::tan(u);
    const double si = 1.0 / std::cos(i), su = 1.0 / std::cos(u);
    return (1.0 + xb * u0) * (su - si) -
           (xb / 2.0) * (tu * su - std::log((tu + su) / (ti + si)) - ti * si);
}

double br2_m0(double i, double u, double u0, double xb) {
    const double ci = std::cos(i), cu = std::cos(u);
    return (1.0 + xb * u0) *
               ((u - i) / 2.0 - (std::sin(2.0 * u) - std::sin(2.0 * i)) / 4.0) -
           xb * (std::log(ci / cu) + (cu * cu - ci * ci) / 2.0);
}

double br2_m1(double i, double u, double u0, double xb) {
    const double ti = std::tan(i), tu = std::tan(u);
    const double si = 1.0 / std::cos(i), su = 1.0 / std::cos(u);
    return (1.0 + xb * u0) *
               (std::log((tu + su) / (ti + si)) - (std::sin(u) - std::sin(i))) -
           xb * ((su + std::cos(u)) - (si + std::cos(i)));
}

double br2_m2(double i, double u, double u0, double xb) {
    const double ti = std::tan(i), tu = std::tan(u);
    return (1.0 + xb * u0) * (i - u + tu - ti) -
           xb * ((tu * tu - ti * ti) / 2.0 +
                 std::log(std::cos(u) / std::cos(i)));
}

using Bracket = double (*)(double, double, double, double);
constexpr Bracket kFirstBrackets[3] = {br1_m0, br1_m1, br1_m2};
constexpr Bracket kSecondBrackets[3] = {br2_m0, br2_m1, br2_m2};

// Arrival window of the second bounce given the sampled image edges, clamped
// within the receiver gate; absent when empty.
struct Window2 {
    double i = 0.0;
    double u = 0.0;
    bool ok = false;
};

Window2 second_window(double theta_ri, double theta_ru, double th_hat,
                      double th_tu_hat) {
    Window2 w;
    w.i = std::max({theta_ri, M_PI / 2.0 - th_tu_hat, 0.0});
    w.u = std::min(theta_ru, M_PI / 2.0 - th_hat);
    w.ok = w.i < w.u;
    return w;
}

PdpModel::Family make_family(const Scenario& s, const FaceFamily& fam) {
    PdpModel::Family f;
    f.fam = fam;
    f.proj = s.d * std::abs(std::cos(fam.phi_face));
    const AngleSet as = angle_set(s, fam.phi_face);
    f.theta_ri = as.theta_ri;
    f.theta_ru = as.theta_ru;
    f.window = coupling_window(as, fam.dim);
    if (f.window) {
        f.comp = composites(s, fam, *f.window);
        f.tau_if = f.proj / std::cos(f.window->theta_i) / kSpeedOfLight;
        f.tau_uf = f.proj / std::cos(f.window->theta_u) / kSpeedOfLight;
    } else {
        // Only the x/y/z composites are meaningful without a window; they
        // feed the survival exponent of the two-bounce branch.
        CouplingWindow flat;
        flat.theta_i = 0.0;
        flat.theta_u = 0.0;
        f.comp = composites(s, fam, flat);
    }
    f.image = image_source_model(s, fam.phi_face, fam.dim);
    return f;
}

// Largest clip value image_upper_edge can return for this variant.
double upper_edge_cap(const ImageSourceModel& m, UpperEdgeVariant variant) {
    return variant == UpperEdgeVariant::Literal ? m.theta_tuf
                                                : M_PI / 2.0 - m.theta_tuf;
}

// Support of the two-bounce branch in arrival angle: theta ranges between
// the tightest lower edge and the widest upper edge over the image mixture.
bool second_theta_range(const PdpModel::Family& f, UpperEdgeVariant variant,
                        double* lo, double* hi) {
    if (f.image.empty) return false;
    const double cap = upper_edge_cap(f.image, variant);
    *lo = std::max(f.theta_ri, M_PI / 2.0 - cap);
    *lo = std::max(*lo, 0.0);
    *hi = std::min(f.theta_ru, f.image.theta_tif);
    return *lo + 1e-9 < *hi;
}

// P[arrival angle window of the two-bounce branch contains theta | d-hat].
// The indicator is resolved analytically in theta-hat: the upper-edge
// condition is a step along theta-hat for both variants, so the continuous
// part integrates to a tangent difference.
double prob_theta_in_window(const PdpModel::Family& f,
                            UpperEdgeVariant variant, double theta,
                            double dhat) {
    if (theta < f.theta_ri || theta > f.theta_ru) return 0.0;
    const double target = M_PI / 2.0 - theta;  // required upper-edge level
    if (upper_edge_cap(f.image, variant) < target) return 0.0;

    const ImageAnglePdf pdf = image_angle_pdf(f.image, dhat);
    const double h = dhat - f.image.a_prime / 2.0;
    const double ratio = f.image.a / h;
    // theta-hat threshold above which the virtual upper edge reaches target.
    double t_star;
    if (variant == UpperEdgeVariant::Literal) {
        t_star = std::tan(target) - ratio;
    } else {
        t_star = std::atan(std::tan(target) - ratio);
    }

    const double hi_eff = std::min(pdf.hi, target);  // theta <= pi/2 - th_hat
    const double lo_eff = std::max(pdf.lo, t_star);
    double mass = 0.0;
    if (hi_eff > lo_eff)
        mass += (std::tan(hi_eff) - std::tan(lo_eff)) / pdf.denom;
    if (pdf.atom_mass > 0.0 && pdf.atom_angle >= t_star &&
        pdf.atom_angle <= hi_eff)
        mass += pdf.atom_mass;
    return std::clamp(mass, 0.0, 1.0);
}

// Moment contributions [M0, M1, M2] of one family's single-bounce branch.
std::array<double, 3> family_first_moments(const PdpModel& m,
                                           const PdpModel::Family& f) {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    if (!f.window || f.proj <= 0.0) return out;
    const CouplingWindow& w = *f.window;
    const double common = m.gamma_l * m.gamma_rm * m.lambda_b * m.psi *
                          f.fam.a_mean * std::exp(f.comp.g0);
    const double scale[3] = {1.0 / (2.0 * f.proj), 1.0 / (2.0 * kSpeedOfLight),
                             f.proj / (2.0 * kSpeedOfLight * kSpeedOfLight)};
    for (int k = 0; k < 3; ++k)
        out[k] = common * scale[k] *
                 kFirstBrackets[k](w.theta_i, w.theta_u, f.comp.u0,
                                   f.comp.xbar);
    return out;
}

// Moment contributions of the two-bounce branch: the per-(d-hat, theta-hat)
// closed bracket averaged over the image mixture (32-point tensor panels plus
// the angular atom).
std::array<double, 3> family_second_moments(const PdpModel& m,
                                            const PdpModel::Family& f) {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    if (!m.second_order || f.image.empty || f.proj <= 0.0) return out;

    const auto g_fn = [&](int k, double th_hat, double dhat) {
        const double tu_hat =
            image_upper_edge(f.image, th_hat, dhat, m.upper_edge);
        const Window2 w =
            second_window(f.theta_ri, f.theta_ru, th_hat, tu_hat);
        if (!w.ok) return 0.0;
        const LinWeights lw = lin_weights(f.comp, w.i, w.u);
        return kSecondBrackets[k](w.i, w.u, lw.u0, lw.xbar) * lw.e;
    };

    std::array<double, 3> mix{0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        mix[k] = integrate_gl32(
            [&](double dhat) {
                const ImageAnglePdf pdf = image_angle_pdf(f.image, dhat);
                double inner = pdf.atom_mass * g_fn(k, pdf.atom_angle, dhat);
                if (pdf.hi > pdf.lo)
                    inner += integrate_gl32(
                        [&](double th) {
                            return image_angle_density(pdf, th) *
                                   g_fn(k, th, dhat);
                        },
                        pdf.lo, pdf.hi);
                return image_distance_pdf(f.image, dhat) * inner;
            },
            f.image.support_lo, f.image.support_hi);
    }

    const double common = m.gamma_l * m.gamma_rm * m.gamma_rm * m.lambda_b *
                          m.psi * f.fam.a_mean * f.image.p;
    const double scale[3] = {1.0 / (2.0 * f.proj), 1.0 / (2.0 * kSpeedOfLight),
                             f.proj / (2.0 * kSpeedOfLight * kSpeedOfLight)};
    for (int k = 0; k < 3; ++k) out[k] = common * scale[k] * mix[k];
    return out;
}

// Constant factors of the moment prefactors, shared by both orientation
// models (the families differ).
PdpModel model_shell(const Scenario& s) {
    PdpModel m;
    m.gamma_l = friis_factor(s);
    m.gamma_rm = s.gamma_rm;
    m.psi = self_block_weight(s);
    m.lambda_b = s.lambda_b;
    m.second_order = s.second_order;
    m.upper_edge = s.upper_edge;
    return m;
}

std::array<double, 3> family_total_moments(const PdpModel& shell,
                                           const Scenario& s,
                                           const FaceFamily& fam) {
    const PdpModel::Family f = make_family(s, fam);
    const auto a = family_first_moments(shell, f);
    const auto b = family_second_moments(shell, f);
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

std::array<double, 3> fixed_moments(const Scenario& s) {
    const PdpModel shell = model_shell(s);
    std::array<double, 3> total{0.0, 0.0, 0.0};
    for (const FaceFamily& fam : face_families(s, s.phi_b)) {
        const auto v = family_total_moments(shell, s, fam);
        for (int k = 0; k < 3; ++k) total[k] += v[k];
    }
    return total;
}

}  // namespace

PdpModel pdp_model(const Scenario& s) {
    if (s.orientation != OrientationModel::Fixed)
        throw scenario_error(
            "pdp_model: the delay profile is defined per face angle; "
            "uniform-orientation scenes support delay_stats only");
    PdpModel m;
    m.gamma_l = friis_factor(s);
    m.gamma_rm = s.gamma_rm;
    m.psi = self_block_weight(s);
    m.lambda_b = s.lambda_b;
    m.second_order = s.second_order;
    m.upper_edge = s.upper_edge;

    const auto fams = face_families(s, s.phi_b);
    m.families = {make_family(s, fams[0]), make_family(s, fams[1])};

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& f : m.families) {
        if (f.window) {
            lo = std::min(lo, f.tau_if);
            hi = std::max(hi, f.tau_uf);
        }
        double t_lo, t_hi;
        if (m.second_order &&
            second_theta_range(f, m.upper_edge, &t_lo, &t_hi)) {
            lo = std::min(lo, f.proj / std::cos(t_lo) / kSpeedOfLight);
            hi = std::max(hi, f.proj / std::cos(t_hi) / kSpeedOfLight);
        }
    }
    if (std::isfinite(lo) && hi > 0.0) {
        m.tau_min = lo;
        m.tau_max = hi;
    }
    return m;
}

double pdp(const PdpModel& m, double tau) {
    if (!(tau > 0.0)) return 0.0;
    double total = 0.0;
    for (const auto& f : m.families) {
        if (f.proj <= 0.0) continue;
        const double ct = kSpeedOfLight * tau;
        if (ct <= f.proj) continue;  // below the mirror delay of this family
        const double cos_th = f.proj / ct;
        const double theta = std::acos(cos_th);
        const double sec = 1.0 / cos_th;
        const double tan = std::sqrt(std::max(sec * sec - 1.0, 0.0));
        const double expo =
            std::exp(-(f.comp.x * tan + f.comp.y + f.comp.z * sec));
        const double base =
            f.fam.a_mean * m.lambda_b * m.psi * expo / (2.0 * ct * tau);

        if (f.window && tau >= f.tau_if && tau <= f.tau_uf)
            total += m.gamma_l * m.gamma_rm * base;

        double t_lo, t_hi;
        if (m.second_order &&
            second_theta_range(f, m.upper_edge, &t_lo, &t_hi) &&
            theta >= t_lo && theta <= t_hi) {
            const double prob = integrate(
                [&](double dhat) {
                    return image_distance_pdf(f.image, dhat) *
                           prob_theta_in_window(f, m.upper_edge, theta, dhat);
                },
                f.image.support_lo, f.image.support_hi, 1e-9);
            total += m.gamma_l * m.gamma_rm * m.gamma_rm * std::sin(theta) *
                     base * f.image.p * prob;
        }
    }
    return total;
}

double pdp(const Scenario& s, double tau) { return pdp(pdp_model(s), tau); }

double arrival_density(const Scenario& s, ReflectionOrder j, double tau) {
    const PdpModel m = pdp_model(s);
    double min_mirror = std::numeric_limits<double>::infinity();
    for (const auto& f : m.families)
        if (f.proj > 0.0)
            min_mirror = std::min(min_mirror, f.proj / kSpeedOfLight);
    if (tau < min_mirror)
        throw domain_error("arrival_density: tau below every mirror delay");

    double total = 0.0;
    for (const auto& f : m.families) {
        if (f.proj <= 0.0) continue;
        const double ct = kSpeedOfLight * tau;
        if (ct <= f.proj) continue;
        const double cos_th = f.proj / ct;
        const double theta = std::acos(cos_th);
        const double sec = 1.0 / cos_th;
        const double sin_th = std::sin(theta);
        const double tan = sin_th * sec;
        const double expo =
            std::exp(-(f.comp.x * tan + f.comp.y + f.comp.z * sec));
        const double base = f.fam.a_mean * kSpeedOfLight * m.lambda_b * m.psi *
                            expo / (2.0 * sin_th);
        if (j == ReflectionOrder::First) {
            if (f.window && tau >= f.tau_if && tau <= f.tau_uf) total += base;
            continue;
        }
        double t_lo, t_hi;
        if (m.second_order &&
            second_theta_range(f, m.upper_edge, &t_lo, &t_hi) &&
            theta >= t_lo && theta <= t_hi) {
            const double prob = integrate(
                [&](double dhat) {
                    return image_distance_pdf(f.image, dhat) *
                           prob_theta_in_window(f, m.upper_edge, theta, dhat);
                },
                f.image.support_lo, f.image.support_hi, 1e-9);
            total += base * f.image.p * prob;
        }
    }
    return total;
}

std::array<double, 3> delay_moments(const Scenario& s) {
    if (s.orientation == OrientationModel::Fixed) return fixed_moments(s);
    // Uniform orientations: average the per-angle closed moments over the
    // coupling range of the face angle, mirroring the count/path-loss
    // averages (both families sweep the same range).
    const OrientationLimits lim = orientation_limits(s);
    const double lo = std::max(lim.phi_i1, 0.0);
    const double hi = std::min(lim.phi_u2, M_PI);
    std::array<double, 3> total{0.0, 0.0, 0.0};
    if (!(lo < hi)) return total;
    const double mid = std::clamp(lim.phi_u1, lo, hi);
    const PdpModel shell = model_shell(s);
    for (int k = 0; k < 3; ++k) {
        const auto per_angle = [&](double phi) {
            double v = 0.0;
            for (const FaceFamily& fam : face_families(s, 0.0)) {
                FaceFamily shifted = fam;
                shifted.phi_face = phi;
                v += family_total_moments(shell, s, shifted)[k];
            }
            return v;
        };
        double v = 0.0;
        if (mid > lo) v += integrate(per_angle, lo, mid, 1e-9);
        if (hi > mid) v += integrate(per_angle, mid, hi, 1e-9);
        total[k] = v / M_PI;
    }
    return total;
}

DelayStats delay_stats(const Scenario& s) {
    const auto m = delay_moments(s);
    if (!(m[0] > 0.0))
        throw domain_error("delay_stats: zero profile mass (no coupling)");
    DelayStats st;
    st.tau_mean = m[1] / m[0];
    double var = m[2] / m[0] - st.tau_mean * st.tau_mean;
    if (var < 0.0) {
        // Cancellation noise between the two moment ratios scales with the
        // second moment itself; anything deeper is a genuine failure.
        if (var < -1e-6 * (m[2] / m[0]))
            throw numerical_error("delay_stats: negative delay variance");
        var = 0.0;
    }
    st.tau_rms = std::sqrt(var);
    st.b_c = st.tau_rms > 0.0 ? 1.0 / (50.0 * st.tau_rms)
                              : std::numeric_limits<double>::infinity();
    return st;
}

std::vector<std::pair<double, double>> pdp_curve(const Scenario& s) {
    const PdpModel m = pdp_model(s);
    std::vector<std::pair<double, double>> out;
    if (!(m.tau_max > 0.0)) return out;
    const double step = 1e-10;
    const double lo = 0.9 * m.tau_min;
    const double hi = 1.1 * m.tau_max;
    const auto n = static_cast<std::size_t>((hi - lo) / step) + 1;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = lo + static_cast<double>(i) * step;
        out.emplace_back(tau, pdp(m, tau));
    }
    return out;
}

}  // namespace mmgeo
