#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imfd/exact_solutions.hpp"
#include "imfd/experiments.hpp"

namespace imfd {

/**
 * RunConfig: the full command-line surface. Values resolve in the order
 * flags > config file > the defaults below; the effective result is
 * echoed into the output directory as config.echo so any run can be
 * reproduced from its own artifacts.
 */
struct RunConfig {
    std::string command;  // table1 | sweep-mu | sweep-r | convergence | single-run

    // Grid and integration parameters (shared by every experiment).
    double a = 1.0;
    double b = 2.0;
    std::size_t n_nodes = 40;
    double jitter_frac = 0.1;
    double dt = 1e-3;
    std::size_t n_steps = 1000;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double r = 0.2564;
    double mu_noninv = 1.0;
    std::string mu_inv = "5";  // a number, or "auto" for per-realization matching
    std::size_t euler_period = 20;
    bool include_center = true;

    // Solution selection (single-run; the ensemble commands fix their own
    // presets). Unset constants fall back to the preset values.
    std::string solution = "u1";
    std::optional<double> c1;
    std::optional<double> c2;
    std::optional<double> c3;
    std::string scheme = "invariant";  // single-run only

    // Sweep axes. An empty invariant-mu axis means automatic matching
    // from the non-invariant axis, entry by entry.
    std::vector<double> mu_values = {0.0, 0.125, 0.25, 0.5, 0.75,
                                     1.0, 1.5,   2.0,  3.0, 4.0};
    std::vector<double> mu_inv_values;
    std::vector<double> r_values = {0.16, 0.17, 0.18,  0.19,   0.195, 0.20,
                                    0.21, 0.225, 0.24, 0.2564, 0.28,  0.30};
    std::vector<double> h_values = {0.0625, 0.03125, 0.015625, 0.0078125,
                                    0.00390625};

    std::size_t trajectory_stride = 0;  // single-run: 0 = no trajectory.csv
    std::size_t threads = 0;            // 0 = available cores
    std::string out = "out";

    // The space-time window this config integrates over.
    SpaceTimeBox box() const;
    HarnessConfig harness() const;
    std::optional<double> resolved_mu_inv() const;  // nullopt = automatic
    // Preset constants of `kind`, overridden by c1..c3, validated on box().
    ExactSolution resolve_solution(SolutionKind kind) const;
};

// Parses flags and the optional --config file (flat key = value lines,
// keys named after the long flags). Throws InvalidConfig with the
// offending key in the message; returns nullopt when help was requested
// (already printed).
std::optional<RunConfig> parse_config(int argc, const char* const* argv);

// The flat key = value echo; feeding it back through --config reproduces
// the run.
void write_config_echo(std::ostream& out, const RunConfig& config);

// Runs the selected command and writes its files under config.out.
// Returns 0; realization failures inside ensembles are reported through
// the converged CSV column, not the exit status. Hard errors (I/O, a
// failed single-run integration) propagate as exceptions.
int dispatch(const RunConfig& config);

// Full entry point: parse, validate, dispatch. Exit codes: 0 success,
// 1 hard error, 2 invalid config or flags.
int run_cli(int argc, const char* const* argv);

} // namespace imfd
