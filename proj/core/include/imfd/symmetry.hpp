#pragma once

#include <array>
#include <span>
#include <vector>

#include "imfd/geometry.hpp"

namespace imfd {

/**
 * GroupElement: parameters of the five-parameter symmetry group
 *
 *   T = e^{2 eps3} (t + eps1)
 *   X = e^{eps3 + 2 eps4} (x / (1 - eps5 x) + eps2)
 *   U = e^{-3 eps4} (1 - eps5 x)^3 u
 *
 * The action is well-defined at (t, x, u) only when 1 - eps5*x != 0.
 */
struct GroupElement {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double eps3 = 0.0;
    double eps4 = 0.0;
    double eps5 = 0.0;
};

struct ActionPoint {
    double t = 0.0;
    double x = 0.0;
    double u = 0.0;
};

// Jet-space image of a point under the prolonged action: the transformed
// first derivatives alongside (T, X, U). Needed by the frame
// normalization tests (U_T = 1, U_X = 0 on the cross-section).
struct ProlongedPoint {
    double t = 0.0;
    double x = 0.0;
    double u = 0.0;
    double ut = 0.0;
    double ux = 0.0;
};

/**
 * DiscreteFrame: the per-node product-frame component eps5 selected from
 * the frame cubic, plus the smallest |1 - eps5*x^j| margin over the
 * stencil it must keep away from the poles {1/x^j}.
 */
struct DiscreteFrame {
    double eps5 = 0.0;
    double pole_margin = 0.0;
};

// Point action. Raises PoleHit when 1 - eps5*x == 0.
ActionPoint apply_group(const GroupElement& g, double t, double x, double u);

// Prolonged action on (t, x, u, u_t, u_x) with the chain-rule transformed
// derivatives.
ProlongedPoint apply_group_prolonged(const GroupElement& g, double t, double x,
                                     double u, double ut, double ux);

// Test helper: evaluates g . (h . point). Property tests compare the
// result against the action of the parameter-composed element for
// one-parameter subgroups (eps2, eps3 and eps5 compose additively).
ActionPoint compose_check(const GroupElement& g, const GroupElement& h,
                          double t, double x, double u);

// The continuous moving frame from the normalizations
// T = 0, X = 0, U = 1, U_T = 1, U_X = 0:
//
//   eps1 = -t
//   eps2 = -(x^2 u_x + 3 x u) / (3 u)
//   eps3 = ln(u_t / u) / 2
//   eps4 = ln(3 u^{4/3} / (x u_x + 3 u))
//   eps5 = u_x / (x u_x + 3 u)
//
// Domain: u > 0, u_t/u > 0, u_x != 0 and x u_x + 3u > 0 (the logarithm
// arguments and fractions must exist); otherwise FrameUndefined.
GroupElement continuous_frame(double t, double x, double u, double ut, double ux);

// Coefficients (a3, a2, a1, a0) of the frame cubic in eps5 built from the
// flanking nodes:
//   a3 = (u_r x_r^3 - u_l x_l^3) / (x_r - x_l)
//   a2 = -3 (u_r x_r^2 - u_l x_l^2) / (x_r - x_l)
//   a1 = 3 (u_r x_r - u_l x_l) / (x_r - x_l)
//   a0 = -(u_r - u_l) / (x_r - x_l)
std::array<double, 4> cubic_coefficients(double xl, double ul, double xr, double ur);

// Solves the frame cubic and selects the admissible root: complex roots
// are discarded; a real root is inadmissible when
// min_j |1 - eps5*x^j| < 1e-6 * max_j |eps5*x^j| over the stencil
// positions (the spurious 1/x root family); among the remaining roots the
// one closest to the continuous-frame predictor
// u_x^d / (x_c u_x^d + 3 u_c), with u_x^d the centered difference of the
// flanking values, is chosen. Raises NoAdmissibleRoot when no real root
// survives.
DiscreteFrame discrete_frame(double xl, double ul, double xc, double uc,
                             double xr, double ur,
                             std::span<const double> stencil_positions);

/**
 * InvariantizedStencil: the eps5-invariantized stencil quantities
 *
 *   iota(x^j)  = x^j / (1 - eps5 x^j)
 *   iota(dx^j) = iota(x^j) - iota(x_c)
 *   iota(u^j)  = (1 - eps5 x^j)^3 u^j
 *
 * together with the invariantized center values and the factor
 * (1 - eps5 x_c)^3 needed to map an updated iota(u) back to u.
 */
struct InvariantizedStencil {
    std::vector<double> offsets;  // iota(dx^j)
    std::vector<double> values;   // iota(u^j)
    double u = 0.0;               // iota(u) at the center
    double u_hat = 0.0;           // iota(u_hat)
    double u_check = 0.0;         // iota(u_check)
    double center_factor = 0.0;   // (1 - eps5 x_c)^3
};

// Invariantizes a stencil's nodes and values under the frame, along with
// the center's u_hat/u_check companions. values is the full per-node
// vector indexed by the neighborhood's node indices. Raises PoleHit if a
// node sits on a pole (excluded already by frame admissibility).
InvariantizedStencil invariantize_stencil(const DiscreteFrame& frame, double xc,
                                          const Neighborhood& neigh,
                                          const NodeSet& nodes,
                                          const std::vector<double>& values,
                                          double u_hat, double u_check);

} // namespace imfd
