#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "imfd/errors.hpp"
#include "imfd/geometry.hpp"

namespace {

imfd::NodeSet uniform_grid(double a, double b, std::size_t n) {
    return imfd::build_perturbed_grid(a, b, n, 0.0, 0);
}

} // namespace

TEST_CASE("zero jitter reproduces the uniform grid exactly") {
    const auto nodes = uniform_grid(0.0, 1.0, 5);
    REQUIRE(nodes.size() == 5);
    CHECK(nodes.positions[0] == 0.0);
    CHECK(nodes.positions[1] == 0.25);
    CHECK(nodes.positions[2] == 0.5);
    CHECK(nodes.positions[3] == 0.75);
    CHECK(nodes.positions[4] == 1.0);
    CHECK(nodes.left_boundary == 0);
    CHECK(nodes.right_boundary == 4);
    CHECK(nodes.base_spacing == 0.25);
    CHECK(nodes.is_boundary(0));
    CHECK(nodes.is_boundary(4));
    CHECK(!nodes.is_boundary(2));
}

TEST_CASE("jittered grid keeps endpoints, ordering and base spacing") {
    const auto nodes = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 1);
    REQUIRE(nodes.size() == 40);
    CHECK(nodes.positions.front() == 1.0);
    CHECK(nodes.positions.back() == 2.0);
    CHECK(nodes.base_spacing == doctest::Approx(1.0 / 39.0).epsilon(1e-15));
    CHECK(nodes.seed == 1);

    for (std::size_t i = 1; i < nodes.size(); ++i) {
        CHECK(nodes.positions[i] > nodes.positions[i - 1]);
    }
    // Interior nodes stay near their uniform-grid bases: Gaussian jitter
    // with sigma = 0.1 dx essentially never exceeds the half-spacing.
    const double dx = nodes.base_spacing;
    std::vector<double> sorted = nodes.positions;
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        const double base = 1.0 + static_cast<double>(i) * dx;
        CHECK(std::abs(sorted[i] - base) < 0.5 * dx);
    }
}

TEST_CASE("grid generation is deterministic in the seed") {
    const auto g1 = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 7);
    const auto g2 = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 7);
    const auto g3 = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 8);
    REQUIRE(g1.size() == g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) {
        CHECK(g1.positions[i] == g2.positions[i]);
    }
    bool any_diff = false;
    for (std::size_t i = 0; i < g1.size(); ++i) {
        if (g1.positions[i] != g3.positions[i]) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("grid preconditions raise InvalidConfig") {
    CHECK_THROWS_AS(imfd::build_perturbed_grid(2.0, 1.0, 40, 0.1, 1), imfd::InvalidConfig);
    CHECK_THROWS_AS(imfd::build_perturbed_grid(1.0, 1.0, 40, 0.1, 1), imfd::InvalidConfig);
    CHECK_THROWS_AS(imfd::build_perturbed_grid(1.0, 2.0, 4, 0.1, 1), imfd::InvalidConfig);
    CHECK_THROWS_AS(imfd::build_perturbed_grid(1.0, 2.0, 40, -0.1, 1), imfd::InvalidConfig);
    CHECK_THROWS_AS(imfd::build_perturbed_grid(1.0, 2.0, 40, 0.5, 1), imfd::InvalidConfig);
}

TEST_CASE("find_neighbors collects every node within the radius") {
    const auto nodes = uniform_grid(0.0, 1.0, 21);  // spacing 0.05
    const std::size_t c = 10;                       // x = 0.5

    SUBCASE("center included") {
        const auto neigh = imfd::find_neighbors(nodes, c, 0.12, true);
        CHECK(neigh.center == c);
        CHECK(neigh.radius == 0.12);
        REQUIRE(neigh.k() == 5);
        CHECK(neigh.neighbor_indices == std::vector<std::size_t>{8, 9, 10, 11, 12});
        for (std::size_t j = 0; j < neigh.k(); ++j) {
            CHECK(neigh.offsets[j] ==
                  doctest::Approx(nodes.positions[neigh.neighbor_indices[j]] - 0.5)
                      .epsilon(1e-15));
        }
        // The center contributes a zero offset.
        CHECK(std::count(neigh.offsets.begin(), neigh.offsets.end(), 0.0) == 1);
    }

    SUBCASE("center excluded") {
        const auto neigh = imfd::find_neighbors(nodes, c, 0.12, false);
        REQUIRE(neigh.k() == 4);
        CHECK(neigh.neighbor_indices == std::vector<std::size_t>{8, 9, 11, 12});
        for (double d : neigh.offsets) CHECK(d != 0.0);
    }
}

TEST_CASE("find_neighbors raises InsufficientStencil for a too-small radius") {
    const auto nodes = uniform_grid(0.0, 1.0, 21);
    CHECK_THROWS_AS(imfd::find_neighbors(nodes, 10, 0.01, true), imfd::InsufficientStencil);
    try {
        imfd::find_neighbors(nodes, 10, 0.01, true);
    } catch (const imfd::InsufficientStencil& e) {
        const std::string msg = e.what();
        CHECK(msg.find("10") != std::string::npos);
    }
}

TEST_CASE("neighbor relation is symmetric on a jittered grid") {
    const auto nodes = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 3);
    const double r = 0.2;
    std::vector<std::set<std::size_t>> adj(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto neigh = imfd::find_neighbors(nodes, i, r, false);
        adj[i] = std::set<std::size_t>(neigh.neighbor_indices.begin(),
                                       neigh.neighbor_indices.end());
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j : adj[i]) {
            CHECK(adj[j].count(i) == 1);
        }
    }
}

TEST_CASE("neighborhood_from_indices reuses a frozen index set") {
    const auto nodes = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 5);
    const auto live = imfd::find_neighbors(nodes, 17, 0.2, true);
    const auto frozen =
        imfd::neighborhood_from_indices(nodes, 17, live.neighbor_indices, 0.2);
    CHECK(frozen.center == live.center);
    CHECK(frozen.radius == live.radius);
    REQUIRE(frozen.k() == live.k());
    for (std::size_t j = 0; j < live.k(); ++j) {
        CHECK(frozen.neighbor_indices[j] == live.neighbor_indices[j]);
        CHECK(frozen.offsets[j] == live.offsets[j]);
    }
    CHECK_THROWS_AS(imfd::neighborhood_from_indices(nodes, 17, {1, 2, 3}, 0.2),
                    imfd::InsufficientStencil);
}

TEST_CASE("nearest_flanking returns the sorted-array neighbors") {
    const auto nodes = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 2);
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        const auto [l, r] = imfd::nearest_flanking(nodes, i);
        CHECK(l == i - 1);
        CHECK(r == i + 1);
        CHECK(nodes.positions[l] < nodes.positions[i]);
        CHECK(nodes.positions[r] > nodes.positions[i]);
    }
    CHECK_THROWS_AS(imfd::nearest_flanking(nodes, 0), imfd::InvalidConfig);
    CHECK_THROWS_AS(imfd::nearest_flanking(nodes, nodes.size() - 1), imfd::InvalidConfig);
}

TEST_CASE("node CSV round-trips positions exactly") {
    const auto nodes = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 9);
    std::stringstream buf;
    imfd::write_nodes_csv(buf, nodes);

    const std::string text = buf.str();
    CHECK(text.rfind("index,x,is_boundary\n", 0) == 0);

    std::stringstream in(text);
    const auto back = imfd::read_nodes_csv(in);
    REQUIRE(back.size() == nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        CHECK(back.positions[i] == nodes.positions[i]);  // %.17g round-trip
    }
    CHECK(back.left_boundary == nodes.left_boundary);
    CHECK(back.right_boundary == nodes.right_boundary);
    CHECK(back.base_spacing == doctest::Approx(nodes.base_spacing).epsilon(1e-15));
}

TEST_CASE("read_nodes_csv rejects malformed input") {
    std::stringstream missing_header("0,1.0,1\n1,2.0,1\n");
    CHECK_THROWS_AS(imfd::read_nodes_csv(missing_header), imfd::Error);

    std::stringstream unsorted("index,x,is_boundary\n0,2.0,1\n1,1.0,0\n2,3.0,1\n");
    CHECK_THROWS_AS(imfd::read_nodes_csv(unsorted), imfd::DegenerateGrid);

    std::stringstream too_few("index,x,is_boundary\n0,1.0,1\n");
    CHECK_THROWS_AS(imfd::read_nodes_csv(too_few), imfd::Error);
}
