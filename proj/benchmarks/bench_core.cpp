#include <benchmark/benchmark.h>

#include <vector>

#include "imfd/exact_solutions.hpp"
#include "imfd/experiments.hpp"
#include "imfd/geometry.hpp"
#include "imfd/schemes.hpp"
#include "imfd/stencil.hpp"
#include "imfd/symmetry.hpp"

namespace {

// Shared fixture data: one seeded realization of the reference setup.
struct Fixture {
    imfd::NodeSet nodes;
    std::vector<double> u0;
    imfd::ExactSolution sol;
    imfd::BoundaryOracle oracle;

    Fixture()
        : nodes(imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 1)),
          sol(imfd::preset_solution(imfd::SolutionKind::u1)) {
        u0.resize(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            u0[j] = imfd::eval(sol, 0.0, nodes.positions[j]);
        }
        oracle = [this](double t, double x) { return imfd::eval(sol, t, x); };
    }

    imfd::SchemeConfig scheme(imfd::SchemeKind kind) const {
        imfd::SchemeConfig sc;
        sc.r = 0.2564;
        sc.mu = 1.0;
        sc.kind = kind;
        return sc;
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

void BM_weighted_lsq_solve(benchmark::State& state) {
    const Fixture& f = fixture();
    const imfd::Neighborhood neigh = imfd::find_neighbors(f.nodes, 10, 0.2564, true);
    for (auto _ : state) {
        const imfd::DerivativeEstimate est =
            imfd::solve_weighted_lsq(imfd::assemble(neigh, f.u0, 1.0));
        benchmark::DoNotOptimize(est.ux);
    }
}
BENCHMARK(BM_weighted_lsq_solve);

void BM_discrete_frame(benchmark::State& state) {
    const Fixture& f = fixture();
    const imfd::Neighborhood neigh = imfd::find_neighbors(f.nodes, 10, 0.2564, true);
    std::vector<double> positions;
    for (std::size_t j : neigh.neighbor_indices) positions.push_back(f.nodes.positions[j]);
    const auto [l, r] = imfd::nearest_flanking(f.nodes, 10);
    for (auto _ : state) {
        const imfd::DiscreteFrame frame = imfd::discrete_frame(
            f.nodes.positions[l], f.u0[l], f.nodes.positions[10], f.u0[10],
            f.nodes.positions[r], f.u0[r], positions);
        benchmark::DoNotOptimize(frame.eps5);
    }
}
BENCHMARK(BM_discrete_frame);

void BM_step_noninvariant(benchmark::State& state) {
    const Fixture& f = fixture();
    const imfd::SchemeConfig sc = f.scheme(imfd::SchemeKind::noninvariant);
    for (auto _ : state) {
        const imfd::IntegrationResult out =
            imfd::integrate(f.nodes, f.u0, f.oracle, 1, 1e-3, sc);
        benchmark::DoNotOptimize(out.state.curr.data());
    }
}
BENCHMARK(BM_step_noninvariant);

void BM_step_invariant(benchmark::State& state) {
    const Fixture& f = fixture();
    const imfd::SchemeConfig sc = f.scheme(imfd::SchemeKind::invariant);
    for (auto _ : state) {
        const imfd::IntegrationResult out =
            imfd::integrate(f.nodes, f.u0, f.oracle, 1, 1e-3, sc);
        benchmark::DoNotOptimize(out.state.curr.data());
    }
}
BENCHMARK(BM_step_invariant);

void BM_mu_matching(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(imfd::mu_matching(f.nodes, f.u0, 0.2564, 1.0));
    }
}
BENCHMARK(BM_mu_matching);

} // namespace

BENCHMARK_MAIN();
