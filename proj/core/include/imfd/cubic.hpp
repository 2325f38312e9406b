#pragma once

#include <complex>
#include <vector>

namespace imfd {

/**
 * One root of a (possibly degenerate) cubic, together with the residual
 * |p(root)| of the original polynomial after Newton polishing.
 */
struct CubicRoot {
    std::complex<double> value;
    double residual = 0.0;

    bool is_real(double tol = 1e-8) const {
        return std::abs(value.imag()) <= tol * (1.0 + std::abs(value.real()));
    }
};

// Roots of a3*e^3 + a2*e^2 + a1*e + a0 = 0 by closed form: trigonometric
// branch when the discriminant gives three real roots, Cardano otherwise,
// each root polished by damped Newton steps. Vanishing leading
// coefficients fall through to the quadratic/linear solver; the all-zero
// polynomial returns no roots.
std::vector<CubicRoot> solve_cubic(double a3, double a2, double a1, double a0);

} // namespace imfd
