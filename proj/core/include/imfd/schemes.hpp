#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "imfd/geometry.hpp"

namespace imfd {

enum class SchemeKind { noninvariant, invariant };

/**
 * SchemeConfig: spatial-discretization and cadence parameters of one
 * integration. mu is the weight parameter of whichever scheme variant the
 * config describes (the two variants typically run with different mu).
 */
struct SchemeConfig {
    double r = 0.0;
    double mu = 0.0;
    std::size_t euler_period = 20;
    bool include_center = true;
    SchemeKind kind = SchemeKind::noninvariant;
};

/**
 * SchemeState: the two time levels of the leapfrog scheme. curr holds u
 * at time t, prev holds the check-level values one step behind. step
 * counts completed steps; during a step call it already names the step
 * being computed, so errors report it directly.
 */
struct SchemeState {
    std::vector<double> prev;
    std::vector<double> curr;
    double t = 0.0;
    std::size_t step = 0;
    double dt = 0.0;
};

// Dirichlet data source: value of the exact solution at (t, x).
using BoundaryOracle = std::function<double(double t, double x)>;

/**
 * StencilTable: per-interior-node neighborhoods, built once per
 * integration (nodes do not move). Entry i belongs to node i+1.
 */
struct StencilTable {
    std::vector<Neighborhood> interior;

    const Neighborhood& at_node(std::size_t node) const {
        return interior.at(node - 1);
    }
};

StencilTable build_stencil_table(const NodeSet& nodes, double r,
                                 bool include_center);

// Builds a table from explicit per-interior-node index lists. Lets the
// equivariance suites hold stencil membership fixed across a group
// transformation (radius balls are not preserved by inversions).
StencilTable stencil_table_from_indices(
    const NodeSet& nodes,
    const std::vector<std::vector<std::size_t>>& indices, double r);

// Right-hand side of u_t = (u^{-4/3} u_x)_x expanded:
// -(4/3) u^{-7/3} ux^2 + u^{-4/3} uxx. Raises NonPositiveU for u <= 0.
double rhs(double u, double ux, double uxx);

// One explicit step of each scheme variant. All four return the full new
// value vector with boundary entries taken from the oracle at
// t_next = dt * state.step (state.step already names the step being
// computed). Leapfrog variants advance from the prev level by 2*dt using
// current-level derivatives.
//
// The invariant variants compute the discrete frame eps5 per node from
// the flanking nodes, invariantize offsets/values/weights, advance the
// invariantized value, and map back through (1 - eps5 x)^3.
std::vector<double> euler_step_noninv(const SchemeState& state,
                                      const SchemeConfig& config,
                                      const NodeSet& nodes,
                                      const StencilTable& table,
                                      const BoundaryOracle& boundary);
std::vector<double> leapfrog_step_noninv(const SchemeState& state,
                                         const SchemeConfig& config,
                                         const NodeSet& nodes,
                                         const StencilTable& table,
                                         const BoundaryOracle& boundary);
std::vector<double> euler_step_inv(const SchemeState& state,
                                   const SchemeConfig& config,
                                   const NodeSet& nodes,
                                   const StencilTable& table,
                                   const BoundaryOracle& boundary);
std::vector<double> leapfrog_step_inv(const SchemeState& state,
                                      const SchemeConfig& config,
                                      const NodeSet& nodes,
                                      const StencilTable& table,
                                      const BoundaryOracle& boundary);

struct TrajectorySample {
    std::size_t step = 0;
    double t = 0.0;
    std::vector<double> u;
};

struct IntegrationResult {
    SchemeState state;
    std::vector<TrajectorySample> trajectory;  // empty unless stride > 0
};

// Time integration driver. Step 1 is Euler (the leapfrog needs two
// levels); afterwards leapfrog, with an Euler restart whenever
// step == 1 (mod euler_period) to suppress the computational mode. Every
// step shifts prev := curr, so Euler restarts re-anchor the leapfrog
// cleanly. After each step the state is health-checked: NaN/Inf values or
// max|u| beyond 1e6 times the initial max raise Instability; scheme
// errors propagate with step and node indices. trajectory_stride > 0
// records every stride-th state (plus the initial one).
IntegrationResult integrate(const NodeSet& nodes,
                            const std::vector<double>& initial,
                            const BoundaryOracle& boundary,
                            std::size_t n_steps, double dt,
                            const SchemeConfig& config,
                            std::size_t trajectory_stride = 0);

// Variant used by the equivariance suites: integrate over a caller-built
// stencil table instead of radius queries.
IntegrationResult integrate_with_table(const NodeSet& nodes,
                                       const std::vector<double>& initial,
                                       const BoundaryOracle& boundary,
                                       std::size_t n_steps, double dt,
                                       const SchemeConfig& config,
                                       const StencilTable& table,
                                       std::size_t trajectory_stride = 0);

} // namespace imfd
