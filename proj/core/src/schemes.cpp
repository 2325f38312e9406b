#include "imfd/schemes.hpp"

#include <cmath>
#include <string>

#include "imfd/errors.hpp"
#include "imfd/stencil.hpp"
#include "imfd/symmetry.hpp"

namespace imfd {

namespace {

std::string at_node_step(std::size_t node, std::size_t step) {
    return "node " + std::to_string(node) + ", step " + std::to_string(step);
}

// Re-raises a scheme error with location context while preserving the
// leaf exception type (experiments record the message per realization).
[[noreturn]] void throw_with_context(const Error& e, const std::string& where) {
    const std::string msg = std::string(e.what()) + " [" + where + "]";
    if (dynamic_cast<const NoAdmissibleRoot*>(&e)) throw NoAdmissibleRoot(msg);
    if (dynamic_cast<const NonPositiveU*>(&e)) throw NonPositiveU(msg);
    if (dynamic_cast<const SingularStencil*>(&e)) throw SingularStencil(msg);
    if (dynamic_cast<const InsufficientStencil*>(&e)) throw InsufficientStencil(msg);
    if (dynamic_cast<const PoleHit*>(&e)) throw PoleHit(msg);
    if (dynamic_cast<const FrameUndefined*>(&e)) throw FrameUndefined(msg);
    throw Error(msg);
}

// Shared body of the two non-invariant steps: derivatives from the
// physical stencil at the current level, explicit update from the chosen
// base level (u for Euler, the check level for leapfrog).
std::vector<double> step_noninv(const SchemeState& state, const SchemeConfig& config,
                                const NodeSet& nodes, const StencilTable& table,
                                const BoundaryOracle& boundary, bool leapfrog) {
    const std::vector<double>& u = state.curr;
    const std::vector<double>& base = leapfrog ? state.prev : state.curr;
    const double span = leapfrog ? 2.0 * state.dt : state.dt;
    const double t_next = state.dt * static_cast<double>(state.step);

    std::vector<double> next(u.size());
    next.front() = boundary(t_next, nodes.positions.front());
    next.back() = boundary(t_next, nodes.positions.back());
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        try {
            const DerivativeEstimate est =
                solve_weighted_lsq(assemble(table.at_node(i), u, config.mu));
            next[i] = base[i] + span * rhs(u[i], est.ux, est.uxx);
        } catch (const Error& e) {
            throw_with_context(e, at_node_step(i, state.step));
        }
        if (next[i] <= 0.0) {
            throw NonPositiveU("non-invariant step produced u=" + std::to_string(next[i]) +
                               " at " + at_node_step(i, state.step));
        }
    }
    return next;
}

// Shared body of the two invariant steps: per-node discrete frame from
// the flanking nodes, invariantized stencil and weights, update in the
// invariantized variables, recovery through (1 - eps5 x)^3.
std::vector<double> step_inv(const SchemeState& state, const SchemeConfig& config,
                             const NodeSet& nodes, const StencilTable& table,
                             const BoundaryOracle& boundary, bool leapfrog) {
    const std::vector<double>& u = state.curr;
    const double span = leapfrog ? 2.0 * state.dt : state.dt;
    const double t_next = state.dt * static_cast<double>(state.step);

    std::vector<double> next(u.size());
    next.front() = boundary(t_next, nodes.positions.front());
    next.back() = boundary(t_next, nodes.positions.back());

    std::vector<double> stencil_positions;
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        const Neighborhood& neigh = table.at_node(i);
        stencil_positions.clear();
        for (std::size_t j : neigh.neighbor_indices) {
            stencil_positions.push_back(nodes.positions[j]);
        }
        try {
            const auto [left, right] = nearest_flanking(nodes, i);
            const DiscreteFrame frame =
                discrete_frame(nodes.positions[left], u[left], nodes.positions[i], u[i],
                               nodes.positions[right], u[right], stencil_positions);
            const InvariantizedStencil inv = invariantize_stencil(
                frame, nodes.positions[i], neigh, nodes, u, 0.0, state.prev[i]);
            const DerivativeEstimate est = solve_weighted_lsq(
                assemble_offsets(inv.offsets, inv.values, config.mu, config.r));
            const double base = leapfrog ? inv.u_check : inv.u;
            const double iota_hat = base + span * rhs(inv.u, est.ux, est.uxx);
            next[i] = iota_hat / inv.center_factor;
        } catch (const Error& e) {
            throw_with_context(e, at_node_step(i, state.step));
        }
        if (next[i] <= 0.0) {
            throw NonPositiveU("invariant step produced u=" + std::to_string(next[i]) +
                               " at " + at_node_step(i, state.step));
        }
    }
    return next;
}

void check_health(const std::vector<double>& u, double cap, std::size_t step) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i])) {
            throw Instability("NaN/Inf at node " + std::to_string(i) + ", step " +
                              std::to_string(step));
        }
        if (std::abs(u[i]) > cap) {
            throw Instability("magnitude " + std::to_string(u[i]) +
                              " beyond 1e6 x initial max at node " + std::to_string(i) +
                              ", step " + std::to_string(step));
        }
    }
}

} // namespace

StencilTable build_stencil_table(const NodeSet& nodes, double r,
                                 bool include_center) {
    StencilTable table;
    table.interior.reserve(nodes.size() - 2);
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        table.interior.push_back(find_neighbors(nodes, i, r, include_center));
    }
    return table;
}

StencilTable stencil_table_from_indices(
    const NodeSet& nodes, const std::vector<std::vector<std::size_t>>& indices,
    double r) {
    if (indices.size() != nodes.size() - 2) {
        throw InvalidConfig("stencil_table_from_indices: need one index list per interior node");
    }
    StencilTable table;
    table.interior.reserve(indices.size());
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        table.interior.push_back(neighborhood_from_indices(nodes, i, indices[i - 1], r));
    }
    return table;
}

double rhs(double u, double ux, double uxx) {
    if (u <= 0.0) {
        throw NonPositiveU("rhs: u=" + std::to_string(u) + " <= 0");
    }
    return -(4.0 / 3.0) * std::pow(u, -7.0 / 3.0) * ux * ux +
           std::pow(u, -4.0 / 3.0) * uxx;
}

std::vector<double> euler_step_noninv(const SchemeState& state,
                                      const SchemeConfig& config,
                                      const NodeSet& nodes,
                                      const StencilTable& table,
                                      const BoundaryOracle& boundary) {
    return step_noninv(state, config, nodes, table, boundary, /*leapfrog=*/false);
}

std::vector<double> leapfrog_step_noninv(const SchemeState& state,
                                         const SchemeConfig& config,
                                         const NodeSet& nodes,
                                         const StencilTable& table,
                                         const BoundaryOracle& boundary) {
    return step_noninv(state, config, nodes, table, boundary, /*leapfrog=*/true);
}

std::vector<double> euler_step_inv(const SchemeState& state,
                                   const SchemeConfig& config,
                                   const NodeSet& nodes,
                                   const StencilTable& table,
                                   const BoundaryOracle& boundary) {
    return step_inv(state, config, nodes, table, boundary, /*leapfrog=*/false);
}

std::vector<double> leapfrog_step_inv(const SchemeState& state,
                                      const SchemeConfig& config,
                                      const NodeSet& nodes,
                                      const StencilTable& table,
                                      const BoundaryOracle& boundary) {
    return step_inv(state, config, nodes, table, boundary, /*leapfrog=*/true);
}

IntegrationResult integrate(const NodeSet& nodes,
                            const std::vector<double>& initial,
                            const BoundaryOracle& boundary,
                            std::size_t n_steps, double dt,
                            const SchemeConfig& config,
                            std::size_t trajectory_stride) {
    const StencilTable table =
        build_stencil_table(nodes, config.r, config.include_center);
    return integrate_with_table(nodes, initial, boundary, n_steps, dt, config, table,
                                trajectory_stride);
}

IntegrationResult integrate_with_table(const NodeSet& nodes,
                                       const std::vector<double>& initial,
                                       const BoundaryOracle& boundary,
                                       std::size_t n_steps, double dt,
                                       const SchemeConfig& config,
                                       const StencilTable& table,
                                       std::size_t trajectory_stride) {
    if (initial.size() != nodes.size()) {
        throw InvalidConfig("integrate: initial values length " +
                            std::to_string(initial.size()) + " != node count " +
                            std::to_string(nodes.size()));
    }
    double initial_max = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i) {
        if (initial[i] <= 0.0) {
            throw NonPositiveU("integrate: initial value " + std::to_string(initial[i]) +
                               " at node " + std::to_string(i));
        }
        initial_max = std::max(initial_max, std::abs(initial[i]));
    }
    const double cap = 1e6 * initial_max;

    IntegrationResult result;
    SchemeState& state = result.state;
    state.prev = initial;
    state.curr = initial;
    state.t = 0.0;
    state.step = 0;
    state.dt = dt;

    if (trajectory_stride > 0) {
        result.trajectory.push_back({0, 0.0, state.curr});
    }

    const bool invariant = (config.kind == SchemeKind::invariant);
    for (std::size_t s = 1; s <= n_steps; ++s) {
        state.step = s;  // steps report themselves under the index being computed
        const bool euler = (s == 1) || ((s - 1) % config.euler_period == 0);

        std::vector<double> next;
        if (invariant) {
            next = euler ? euler_step_inv(state, config, nodes, table, boundary)
                         : leapfrog_step_inv(state, config, nodes, table, boundary);
        } else {
            next = euler ? euler_step_noninv(state, config, nodes, table, boundary)
                         : leapfrog_step_noninv(state, config, nodes, table, boundary);
        }
        check_health(next, cap, s);

        state.prev = std::move(state.curr);
        state.curr = std::move(next);
        state.t = dt * static_cast<double>(s);

        if (trajectory_stride > 0 && s % trajectory_stride == 0) {
            result.trajectory.push_back({s, state.t, state.curr});
        }
    }
    return result;
}

} // namespace imfd
