#pragma once

#include "mmgeo/first_order.hpp"
#include "mmgeo/geometry.hpp"
#include "mmgeo/scenario.hpp"

namespace mmgeo {

/// Statistics of the virtual transmitter created by the first bounce of a
/// two-bounce path: reach limit d_max, feasible-region area for the first
/// reflector, Bernoulli occupancy, and the coefficients of the distance /
/// angle densities of the image source.
struct ImageSourceModel {
    bool empty = true;  ///< no feasible first bounce; p = 0
    double a = 0.0;        ///< reflecting face mean extent
    double a_prime = 0.0;  ///< perpendicular extent (offset of centre behind face)
    double theta_tif = 0.0;  ///< transmitter gate edges at this face angle
    double theta_tuf = 0.0;
    double d_max = 0.0;
    double c1 = 0.0;  ///< width coefficients: width(d) = c1 + 2 c2 d
    double c2 = 0.0;
    double area = 0.0;  ///< feasible-region area A'
    double p = 0.0;     ///< occupancy 1 - exp(-lambda_b A')
    double support_lo = 0.0;  ///< a'/2
    double support_hi = 0.0;  ///< d_max
    double phi_face = 0.0;
    bool clamped = false;  ///< theta_tif hit the pi/2 guard
};

/// Builds the image-source model for the face family at angle phi_face.
/// Degenerate transmitter gates (no first-bounce window) give an empty model
/// with p = 0; lambda_b = 0 gives p = 0 with the geometry still filled in.
ImageSourceModel image_source_model(const Scenario& s, double phi_face,
                                    FaceDim dim = FaceDim::Length);

/// Density of the image-transmitter distance d-hat; 0 outside
/// [a'/2, d_max].
double image_distance_pdf(const ImageSourceModel& m, double dhat);

/// Its CDF (0 below support, 1 above).
double image_distance_cdf(const ImageSourceModel& m, double dhat);

/// Mixed conditional law of the image lower-edge angle given d-hat: a
/// continuous density on [pi/2 - theta_tif, pi/2 - theta_tuf] plus an atom
/// at the lower endpoint.
struct ImageAnglePdf {
    double lo = 0.0;
    double hi = 0.0;
    double atom_angle = 0.0;
    double atom_mass = 0.0;
    double denom = 0.0;     ///< tan(hi) - tan(theta_li)
    double theta_li = 0.0;  ///< face-extent-corrected lower edge
};

/// Throws scenario_error on a degenerate denominator (d-hat at or below
/// a'/2, or a collapsed angular window).
ImageAnglePdf image_angle_pdf(const ImageSourceModel& m, double dhat);

/// Continuous part of the density at theta_hat (0 outside [lo, hi]; the atom
/// is reported separately in the struct).
double image_angle_density(const ImageAnglePdf& pdf, double theta_hat);

/// Upper edge of the virtual beam as a function of the sampled lower edge.
/// Literal evaluates the model formula exactly as printed, including its
/// clip value; TanCorrected is the slit construction
/// arctan(tan(theta) + a/(d-a'/2)) clipped within the image-angle domain.
double image_upper_edge(const ImageSourceModel& m, double theta_hat_ti,
                        double dhat,
                        UpperEdgeVariant variant = UpperEdgeVariant::Literal);

/// True when a sampled (d-hat, theta-hat) pair lies inside the geometric
/// support of the mixed law.
bool image_support_contains(const ImageSourceModel& m, double dhat,
                            double theta_hat);

/// Membership test for reflector centres in the first-bounce feasible
/// region, in the frame of the face family (tx at the apex). The region is
/// the area-consistent band: normal offset d-hat in [a'/2, d_max], along-face
/// offset within [x_lo(d-hat), x_lo(d-hat) + c1 + 2 c2 d-hat].
bool image_region_contains(const ImageSourceModel& m, Point2 tx,
                           Point2 center);

}  // namespace mmgeo
