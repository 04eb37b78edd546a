#pragma once

#include <cmath>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mmgeo/errors.hpp"

namespace mmgeo {

/// Adaptive Gauss-Kronrod integration over [a, b]. Returns 0 for empty
/// intervals; throws numerical_error when the result is not finite.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            std::forward<F>(f), a, b, 12, tol, &err);
    if (!std::isfinite(v))
        throw numerical_error("integrate: non-finite quadrature result");
    return v;
}

/// Fixed 32-node Gauss-Legendre rule, for smooth tensor-product kernels.
template <class F>
double integrate_gl32(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    const double v = boost::math::quadrature::gauss<double, 32>::integrate(
        std::forward<F>(f), a, b);
    if (!std::isfinite(v))
        throw numerical_error("integrate_gl32: non-finite quadrature result");
    return v;
}

}  // namespace mmgeo
