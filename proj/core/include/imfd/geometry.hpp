#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace imfd {

/**
 * NodeSet: a sorted 1-D scattered node cloud on [a, b].
 *
 * Invariants: positions are strictly increasing; the first and last node
 * are the interval endpoints and carry the Dirichlet data; interior nodes
 * lie strictly inside (a, b).
 */
struct NodeSet {
    std::vector<double> positions;
    std::size_t left_boundary = 0;   // always 0
    std::size_t right_boundary = 0;  // always positions.size() - 1
    std::uint64_t seed = 0;          // RNG seed the jitter was drawn from
    double base_spacing = 0.0;       // dx of the unperturbed uniform grid

    std::size_t size() const { return positions.size(); }
    bool is_boundary(std::size_t i) const {
        return i == left_boundary || i == right_boundary;
    }
};

/**
 * Neighborhood: the stencil of one center node — all nodes within
 * distance <= radius, with precomputed offsets x^j - x^center.
 *
 * Invariants: |offset| <= radius for every entry; offsets of non-center
 * entries are nonzero; at least 4 entries (the Taylor system has 4
 * unknowns).
 */
struct Neighborhood {
    std::size_t center = 0;
    std::vector<std::size_t> neighbor_indices;
    std::vector<double> offsets;
    double radius = 0.0;

    std::size_t k() const { return neighbor_indices.size(); }
};

// Uniform n-point grid on [a, b] with every interior node shifted by a
// Gaussian sample of standard deviation jitter_frac * dx, then re-sorted.
// Endpoints are never perturbed (they carry the Dirichlet data).
// Deterministic for a fixed seed. If sorting leaves duplicate
// coordinates, the grid is regenerated once from seed + 1; a second
// collision raises DegenerateGrid.
NodeSet build_perturbed_grid(double a, double b, std::size_t n,
                             double jitter_frac, std::uint64_t seed);

// All nodes with |x^j - x^center| <= r. The center itself is included as
// a zero offset when include_center is set. Raises InsufficientStencil
// when fewer than 4 nodes qualify.
Neighborhood find_neighbors(const NodeSet& nodes, std::size_t center,
                            double r, bool include_center);

// Rebuilds a Neighborhood from an explicit index list (offsets recomputed
// from the node positions). Used when stencil membership must be held
// fixed while node positions are transformed, e.g. in the equivariance
// suites, where radius balls are not preserved by the group action.
Neighborhood neighborhood_from_indices(const NodeSet& nodes,
                                       std::size_t center,
                                       std::vector<std::size_t> indices,
                                       double r);

// Indices of the nearest node strictly left and strictly right of an
// interior center. On a sorted grid these are center-1 and center+1.
std::pair<std::size_t, std::size_t> nearest_flanking(const NodeSet& nodes,
                                                     std::size_t center);

// CSV serialization (header "index,x,is_boundary"), round-trip exact.
void write_nodes_csv(std::ostream& out, const NodeSet& nodes);
NodeSet read_nodes_csv(std::istream& in);

} // namespace imfd
