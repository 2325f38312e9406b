#pragma once

#include <vector>

#include "imfd/geometry.hpp"

namespace imfd {

/**
 * TaylorSystem: the k x 4 truncated-Taylor design matrix S (row j:
 * 1, dx_j, dx_j^2/2, dx_j^3/6), the diagonal of the weight matrix W with
 * W_jj = exp(-mu * dx_j^2 / r^2), and the right-hand side b of neighbor
 * values. Kept in raw offset form; column scaling happens inside the
 * solver.
 */
struct TaylorSystem {
    std::vector<double> offsets;  // dx_j, length k
    std::vector<double> weights;  // W_jj, length k, strictly positive
    std::vector<double> rhs;      // b_j = u^j, length k
    double radius = 0.0;          // r used in the weight exponent
};

/**
 * DerivativeEstimate: the solved Taylor coefficients at the center node.
 * u0_fit is the fitted constant term; schemes use the nodal value for
 * reaction terms, keeping u0_fit for diagnostics.
 */
struct DerivativeEstimate {
    double u0_fit = 0.0;
    double ux = 0.0;
    double uxx = 0.0;
    double uxxx = 0.0;
};

// Builds the weighted system for one stencil from per-node solution
// values indexed by the neighborhood's node indices.
TaylorSystem assemble(const Neighborhood& neigh,
                      const std::vector<double>& values, double mu);

// Same, from raw offsets and per-neighbor values. Used by the invariant
// scheme, whose offsets and values are the invariantized quantities
// rather than physical node data. The weight exponent keeps the physical
// radius r.
TaylorSystem assemble_offsets(const std::vector<double>& offsets,
                              const std::vector<double>& neighbor_values,
                              double mu, double r);

// Weighted least squares via the 4x4 normal equations
// (S^T W S) y = S^T W b, solved by full-pivot LU. Offsets are rescaled by
// 1/r internally (an exact reparametrization) so the normal matrix stays
// well-conditioned for small radii; a reciprocal-condition guard raises
// SingularStencil on rank-deficient geometry. Exact to roundoff for data
// sampled from any polynomial of degree <= 3, independent of weights.
DerivativeEstimate solve_weighted_lsq(const TaylorSystem& sys);

// Eq.-by-eq application over every interior node; boundary nodes carry
// Dirichlet data and are excluded. Errors are propagated with the
// offending node index in the message.
std::vector<DerivativeEstimate> derivative_field(const NodeSet& nodes,
                                                 const std::vector<double>& values,
                                                 double r, double mu,
                                                 bool include_center = true);

} // namespace imfd
