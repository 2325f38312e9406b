#include "imfd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "imfd/errors.hpp"

namespace imfd {

namespace {

// One jittered grid draw; returns an unsorted position vector.
std::vector<double> draw_positions(double a, double b, std::size_t n,
                                   double jitter_frac, std::uint64_t seed) {
    const double dx = (b - a) / static_cast<double>(n - 1);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, jitter_frac * dx);

    std::vector<double> x(n);
    x.front() = a;
    x.back() = b;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double base = a + static_cast<double>(i) * dx;
        double xi = base + (jitter_frac > 0.0 ? gauss(rng) : 0.0);
        // Keep interior nodes strictly inside (a, b); a >0.5dx excursion
        // at jitter_frac < 0.5 is astronomically unlikely but would break
        // the boundary invariant, so clamp symmetrically.
        xi = std::min(std::max(xi, a + 1e-12 * (b - a)), b - 1e-12 * (b - a));
        x[i] = xi;
    }
    return x;
}

bool strictly_increasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) return false;
    }
    return true;
}

} // namespace

NodeSet build_perturbed_grid(double a, double b, std::size_t n,
                             double jitter_frac, std::uint64_t seed) {
    if (!(b > a)) {
        throw InvalidConfig("build_perturbed_grid: interval requires b > a, got a=" +
                            std::to_string(a) + ", b=" + std::to_string(b));
    }
    if (n < 5) {
        throw InvalidConfig("build_perturbed_grid: need n >= 5 nodes, got n=" +
                            std::to_string(n));
    }
    if (!(jitter_frac >= 0.0 && jitter_frac < 0.5)) {
        throw InvalidConfig("build_perturbed_grid: jitter_frac must be in [0, 0.5), got " +
                            std::to_string(jitter_frac));
    }

    // Duplicate coordinates after sorting have probability ~0; retry once
    // with a shifted seed, then give up.
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<double> x =
            draw_positions(a, b, n, jitter_frac, seed + static_cast<std::uint64_t>(attempt));
        std::sort(x.begin(), x.end());
        if (strictly_increasing(x)) {
            NodeSet nodes;
            nodes.positions = std::move(x);
            nodes.left_boundary = 0;
            nodes.right_boundary = n - 1;
            nodes.seed = seed;
            nodes.base_spacing = (b - a) / static_cast<double>(n - 1);
            return nodes;
        }
    }
    throw DegenerateGrid("build_perturbed_grid: duplicate node coordinates after retry, seed=" +
                         std::to_string(seed));
}

Neighborhood find_neighbors(const NodeSet& nodes, std::size_t center,
                            double r, bool include_center) {
    const double xc = nodes.positions.at(center);

    Neighborhood neigh;
    neigh.center = center;
    neigh.radius = r;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (j == center && !include_center) continue;
        const double d = nodes.positions[j] - xc;
        if (std::abs(d) <= r) {
            neigh.neighbor_indices.push_back(j);
            neigh.offsets.push_back(d);
        }
    }
    if (neigh.k() < 4) {
        throw InsufficientStencil("find_neighbors: node " + std::to_string(center) +
                                  " has only " + std::to_string(neigh.k()) +
                                  " nodes within r=" + std::to_string(r) +
                                  " (need >= 4)");
    }
    return neigh;
}

Neighborhood neighborhood_from_indices(const NodeSet& nodes,
                                       std::size_t center,
                                       std::vector<std::size_t> indices,
                                       double r) {
    if (indices.size() < 4) {
        throw InsufficientStencil("neighborhood_from_indices: node " +
                                  std::to_string(center) + " given only " +
                                  std::to_string(indices.size()) + " indices (need >= 4)");
    }
    const double xc = nodes.positions.at(center);
    Neighborhood neigh;
    neigh.center = center;
    neigh.radius = r;
    neigh.neighbor_indices = std::move(indices);
    neigh.offsets.reserve(neigh.neighbor_indices.size());
    for (std::size_t j : neigh.neighbor_indices) {
        neigh.offsets.push_back(nodes.positions.at(j) - xc);
    }
    return neigh;
}

std::pair<std::size_t, std::size_t> nearest_flanking(const NodeSet& nodes,
                                                     std::size_t center) {
    if (nodes.is_boundary(center) || center >= nodes.size()) {
        throw InvalidConfig("nearest_flanking: center " + std::to_string(center) +
                            " is not an interior node");
    }
    // Positions are sorted, so the flanking nodes are the array neighbors.
    return {center - 1, center + 1};
}

void write_nodes_csv(std::ostream& out, const NodeSet& nodes) {
    out << "index,x,is_boundary\n";
    char buf[64];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", nodes.positions[i]);
        out << i << ',' << buf << ',' << (nodes.is_boundary(i) ? 1 : 0) << '\n';
    }
}

NodeSet read_nodes_csv(std::istream& in) {
    NodeSet nodes;
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,x,is_boundary", 0) != 0) {
        throw Error("read_nodes_csv: missing header line");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');  // index (implicit by order)
        std::getline(row, field, ',');
        nodes.positions.push_back(std::stod(field));
        std::getline(row, field, ',');  // is_boundary (implicit: first/last)
    }
    if (nodes.positions.size() < 2) {
        throw Error("read_nodes_csv: fewer than two nodes");
    }
    nodes.left_boundary = 0;
    nodes.right_boundary = nodes.positions.size() - 1;
    if (!strictly_increasing(nodes.positions)) {
        throw DegenerateGrid("read_nodes_csv: positions not strictly increasing");
    }
    // base_spacing of the matching uniform grid.
    nodes.base_spacing = (nodes.positions.back() - nodes.positions.front()) /
                         static_cast<double>(nodes.positions.size() - 1);
    return nodes;
}

} // namespace imfd
