#include "mmgeo/scenario.hpp"

#include <string>

#include "mmgeo/errors.hpp"

namespace mmgeo {

double lambda_h(const Scenario& s) {
    const double thin = 1.0 - s.lambda_b * s.moments.e_l * s.moments.e_w;
    if (thin <= 0.0)
        throw scenario_error(
            "lambda_h: building coverage >= 1, human thinning factor "
            "non-positive");
    return s.lambda_h_raw * thin;
}

double self_block_weight(const Scenario& s) {
    if (s.carried == 0) return 1.0;
    return std::pow(s.p_self, s.carried);
}

double friis_factor(const Scenario& s) {
    const double g = kSpeedOfLight / (4.0 * M_PI * s.f_c);
    return g * g;
}

BlockageVariant blockage_variant(const Scenario& s) {
    if (s.blockage_override) return *s.blockage_override;
    return s.orientation == OrientationModel::UniformOverPi
               ? BlockageVariant::General
               : BlockageVariant::FixedOrientationApprox;
}

namespace {
void require(bool ok, const char* what) {
    if (!ok) throw scenario_error(std::string("scenario: ") + what);
}
}  // namespace

void validate(const Scenario& s) {
    require(s.d > 0.0, "d must be positive");
    require(s.f_c > 0.0, "f must be positive");
    require(s.p_t > 0.0, "p_t must be positive");
    require(s.theta_bt > 0.0 && s.theta_bt < M_PI, "theta_bt outside (0, pi)");
    require(s.theta_br > 0.0 && s.theta_br < M_PI, "theta_br outside (0, pi)");
    require(s.phi_t >= 0.0 && s.phi_t <= M_PI, "phi_t outside [0, pi]");
    require(s.phi_r >= 0.0 && s.phi_r <= M_PI, "phi_r outside [0, pi]");
    require(s.lambda_b >= 0.0, "lambda_b must be non-negative");
    require(s.moments.e_l > 0.0 && s.moments.e_w > 0.0,
            "building moments must be positive");
    require(s.moments.e_l2 >= s.moments.e_l * s.moments.e_l - 1e-9,
            "e_l2 below e_l^2");
    require(s.moments.e_w2 >= s.moments.e_w * s.moments.e_w - 1e-9,
            "e_w2 below e_w^2");
    require(s.phi_b >= 0.0 && s.phi_b < M_PI, "phi_b outside [0, pi)");
    require(s.lambda_h_raw >= 0.0, "lambda_h_raw must be non-negative");
    require(s.w_h >= 0.0, "w_h must be non-negative");
    require(s.p_self >= 0.0 && s.p_self <= 1.0, "p_self outside [0, 1]");
    require(s.carried >= 0, "carried must be non-negative");
    require(s.gamma_rm > 0.0 && s.gamma_rm <= 1.0, "gamma_rm outside (0, 1]");
    if (s.lambda_h_raw > 0.0) (void)lambda_h(s);  // thinning factor check
}

}  // namespace mmgeo
