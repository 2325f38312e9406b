#include "cli_config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "imfd/errors.hpp"
#include "imfd/geometry.hpp"
#include "imfd/schemes.hpp"

namespace imfd {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kCommands = {"table1", "sweep-mu", "sweep-r",
                                            "convergence", "single-run"};

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidConfig(message);
}

void validate(const RunConfig& c) {
    require(c.b > c.a, "interval: require b > a (got a = " + format_double(c.a) +
                           ", b = " + format_double(c.b) + ")");
    require(c.n_nodes >= 5, "n-nodes: need at least 5 nodes");
    require(c.jitter_frac >= 0.0 && c.jitter_frac < 0.5,
            "jitter-frac: must lie in [0, 0.5) (got " + format_double(c.jitter_frac) + ")");
    require(c.dt > 0.0, "dt: must be positive");
    require(!c.seeds.empty(), "seeds: need at least one seed");
    require(c.r > 0.0, "r: stencil radius must be positive");
    require(c.mu_noninv >= 0.0, "mu-noninv: must be >= 0");
    (void)c.resolved_mu_inv();  // raises on anything but "auto" or a number >= 0
    require(c.euler_period >= 1, "euler-period: must be >= 1");
    require(!c.out.empty(), "out: output directory must be named");
    // Enum-like strings are also checked at parse time; config files reach
    // here unguarded.
    require(std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end(),
            "command: unknown command \"" + c.command + "\"");
    require(c.solution == "u1" || c.solution == "u2" || c.solution == "u3",
            "solution: expected u1, u2 or u3 (got \"" + c.solution + "\")");
    require(c.scheme == "invariant" || c.scheme == "noninvariant",
            "scheme: expected invariant or noninvariant (got \"" + c.scheme + "\")");
    require(!c.mu_values.empty(), "mu-values: need at least one value");
    for (double v : c.mu_values) require(v >= 0.0, "mu-values: entries must be >= 0");
    for (double v : c.mu_inv_values)
        require(v >= 0.0, "mu-inv-values: entries must be >= 0");
    require(!c.r_values.empty(), "r-values: need at least one value");
    for (double v : c.r_values) require(v > 0.0, "r-values: entries must be positive");
    require(!c.h_values.empty(), "h-values: need at least one value");
    for (double v : c.h_values) require(v > 0.0, "h-values: entries must be positive");
}

// Solution presets are validated against the run's own space-time window
// before any computation: an undefined exact solution is a configuration
// problem, not a scheme failure.
void validate_solutions(const RunConfig& c) {
    try {
        if (c.command == "table1") {
            for (SolutionKind k :
                 {SolutionKind::u1, SolutionKind::u2, SolutionKind::u3}) {
                (void)c.resolve_solution(k);
            }
        } else if (c.command == "sweep-mu" || c.command == "sweep-r") {
            (void)c.resolve_solution(SolutionKind::u1);
        } else if (c.command == "single-run") {
            (void)c.resolve_solution(solution_kind_from_name(c.solution));
        }
    } catch (const OutOfDomain& e) {
        throw InvalidConfig(std::string("solution: not defined on the run's "
                                        "space-time window: ") + e.what());
    }
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    return f;
}

void finish_output(std::ofstream& f, const fs::path& path) {
    f.flush();
    if (!f) throw Error("write failed: " + path.string());
    std::cout << "wrote " << path.string() << "\n";
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

void write_sweep_summary(std::ostream& out, const std::string& param,
                         const std::vector<SweepRow>& rows) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-14s %12s %12s %10s\n", "scheme",
                  param.c_str(), "rmse", "converged");
    out << line;
    for (const SweepRow& row : rows) {
        std::snprintf(line, sizeof(line), "%-14s %12.6g %12.3e %10s\n",
                      row.scheme.c_str(), row.param, row.rmse,
                      row.converged ? "yes" : "no");
        out << line;
    }
}

int dispatch_table1(const RunConfig& cfg, const fs::path& dir) {
    const std::vector<ExperimentReport> reports = run_table1(cfg.harness());
    {
        auto f = open_output(dir / "table1.csv");
        write_table1_csv(f, reports);
        finish_output(f, dir / "table1.csv");
    }
    std::ostringstream summary;
    write_summary(summary, reports);
    {
        auto f = open_output(dir / "summary.txt");
        f << summary.str();
        finish_output(f, dir / "summary.txt");
    }
    std::cout << summary.str();
    return 0;
}

int dispatch_sweep(const RunConfig& cfg, const fs::path& dir, bool mu_sweep) {
    const std::string param = mu_sweep ? "mu" : "r";
    const std::vector<SweepRow> rows =
        mu_sweep ? sweep_mu(cfg.harness(), cfg.mu_values, cfg.mu_inv_values)
                 : sweep_r(cfg.harness(), cfg.r_values);
    const fs::path csv = dir / ("sweep_" + param + ".csv");
    {
        auto f = open_output(csv);
        write_sweep_csv(f, param, rows);
        finish_output(f, csv);
    }
    std::ostringstream summary;
    write_sweep_summary(summary, param, rows);
    {
        auto f = open_output(dir / "summary.txt");
        f << summary.str();
        finish_output(f, dir / "summary.txt");
    }
    std::cout << summary.str();
    return 0;
}

int dispatch_convergence(const RunConfig& cfg, const fs::path& dir) {
    const ConvergenceReport report = run_convergence(cfg.h_values, cfg.mu_noninv);
    {
        auto f = open_output(dir / "convergence.csv");
        write_convergence_csv(f, report);
        finish_output(f, dir / "convergence.csv");
    }
    char line[64];
    std::ostringstream summary;
    std::snprintf(line, sizeof(line), "slope_ux  = %.3f\n", report.slope_ux);
    summary << line;
    std::snprintf(line, sizeof(line), "slope_uxx = %.3f\n", report.slope_uxx);
    summary << line;
    {
        auto f = open_output(dir / "summary.txt");
        f << summary.str();
        finish_output(f, dir / "summary.txt");
    }
    std::cout << summary.str();
    return 0;
}

int dispatch_single_run(const RunConfig& cfg, const fs::path& dir) {
    const SolutionKind kind = solution_kind_from_name(cfg.solution);
    const ExactSolution sol = cfg.resolve_solution(kind);
    const SchemeKind scheme = cfg.scheme == "invariant" ? SchemeKind::invariant
                                                        : SchemeKind::noninvariant;
    const std::uint64_t seed = cfg.seeds.front();
    const NodeSet nodes =
        build_perturbed_grid(cfg.a, cfg.b, cfg.n_nodes, cfg.jitter_frac, seed);

    std::vector<double> u0(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        u0[j] = eval(sol, 0.0, nodes.positions[j]);
    }
    const BoundaryOracle oracle = [&sol](double t, double x) { return eval(sol, t, x); };

    double mu = cfg.mu_noninv;
    if (scheme == SchemeKind::invariant) {
        const std::optional<double> explicit_mu = cfg.resolved_mu_inv();
        mu = explicit_mu ? *explicit_mu
                         : mu_matching(nodes, u0, cfg.r, cfg.mu_noninv,
                                       cfg.include_center);
    }

    SchemeConfig sc;
    sc.r = cfg.r;
    sc.mu = mu;
    sc.euler_period = cfg.euler_period;
    sc.include_center = cfg.include_center;
    sc.kind = scheme;

    const IntegrationResult result = integrate(nodes, u0, oracle, cfg.n_steps, cfg.dt,
                                               sc, cfg.trajectory_stride);

    std::vector<double> exact(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        exact[j] = eval(sol, result.state.t, nodes.positions[j]);
    }

    {
        const fs::path path = dir / "final.csv";
        auto f = open_output(path);
        f << "index,x,u_numeric,u_exact,abs_error\n";
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            f << j << ',' << format_double(nodes.positions[j]) << ','
              << format_double(result.state.curr[j]) << ',' << format_double(exact[j])
              << ',' << format_double(std::abs(result.state.curr[j] - exact[j]))
              << '\n';
        }
        finish_output(f, path);
    }
    if (cfg.trajectory_stride > 0) {
        const fs::path path = dir / "trajectory.csv";
        auto f = open_output(path);
        f << "step,t,x,u\n";
        for (const TrajectorySample& sample : result.trajectory) {
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                f << sample.step << ',' << format_double(sample.t) << ','
                  << format_double(nodes.positions[j]) << ','
                  << format_double(sample.u[j]) << '\n';
            }
        }
        finish_output(f, path);
    }

    char line[96];
    std::ostringstream summary;
    summary << "solution = " << cfg.solution << "\n"
            << "scheme   = " << cfg.scheme << "\n"
            << "seed     = " << seed << "\n";
    std::snprintf(line, sizeof(line), "mu       = %s\n", format_double(mu).c_str());
    summary << line;
    std::snprintf(line, sizeof(line), "final_t  = %s\n",
                  format_double(result.state.t).c_str());
    summary << line;
    std::snprintf(line, sizeof(line), "rmse     = %.6e\n",
                  rmse(result.state.curr, exact));
    summary << line;
    {
        auto f = open_output(dir / "summary.txt");
        f << summary.str();
        finish_output(f, dir / "summary.txt");
    }
    std::cout << summary.str();
    return 0;
}

} // namespace

SpaceTimeBox RunConfig::box() const {
    SpaceTimeBox box;
    box.a = a;
    box.b = b;
    box.t0 = 0.0;
    box.t1 = dt * static_cast<double>(n_steps);
    return box;
}

HarnessConfig RunConfig::harness() const {
    HarnessConfig h;
    h.a = a;
    h.b = b;
    h.n_nodes = n_nodes;
    h.jitter_frac = jitter_frac;
    h.dt = dt;
    h.n_steps = n_steps;
    h.seeds = seeds;
    h.r = r;
    h.mu_noninv = mu_noninv;
    h.mu_inv = resolved_mu_inv();
    h.euler_period = euler_period;
    h.include_center = include_center;
    h.threads = threads;
    return h;
}

std::optional<double> RunConfig::resolved_mu_inv() const {
    if (mu_inv == "auto") return std::nullopt;
    double v = 0.0;
    std::size_t pos = 0;
    try {
        v = std::stod(mu_inv, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != mu_inv.size() || mu_inv.empty()) {
        throw InvalidConfig("mu-inv: expected \"auto\" or a number (got \"" + mu_inv +
                            "\")");
    }
    if (v < 0.0) throw InvalidConfig("mu-inv: must be >= 0");
    return v;
}

ExactSolution RunConfig::resolve_solution(SolutionKind kind) const {
    const ExactSolution preset = preset_solution(kind);
    return make_exact_solution(kind, c1.value_or(preset.c1), c2.value_or(preset.c2),
                               c3.value_or(preset.c3), box());
}

std::optional<RunConfig> parse_config(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"Invariant meshless finite differences for the nonlinear "
                 "diffusion equation u_t = (u^(-4/3) u_x)_x"};
    app.set_config("--config", "",
                   "Flat key = value config file; flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    app.add_option("command,--command", cfg.command,
                   "table1 | sweep-mu | sweep-r | convergence | single-run")
        ->required()
        ->check(CLI::IsMember(kCommands));
    app.add_option("--a", cfg.a, "Left end of the interval")->capture_default_str();
    app.add_option("--b", cfg.b, "Right end of the interval")->capture_default_str();
    app.add_option("--n-nodes", cfg.n_nodes, "Number of nodes (>= 5)")
        ->capture_default_str();
    app.add_option("--jitter-frac", cfg.jitter_frac,
                   "Node jitter std dev as a fraction of the base spacing, in [0, 0.5)")
        ->capture_default_str();
    app.add_option("--dt", cfg.dt, "Time step")->capture_default_str();
    app.add_option("--n-steps", cfg.n_steps, "Number of time steps")
        ->capture_default_str();
    app.add_option("--seeds", cfg.seeds, "Grid realization seeds")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--r", cfg.r, "Stencil radius")->capture_default_str();
    app.add_option("--mu-noninv", cfg.mu_noninv,
                   "Weight decay of the non-invariant scheme")
        ->capture_default_str();
    app.add_option("--mu-inv", cfg.mu_inv,
                   "Weight decay of the invariant scheme, or \"auto\" to match")
        ->capture_default_str();
    app.add_option("--euler-period", cfg.euler_period,
                   "Steps between Euler restarts of the leapfrog")
        ->capture_default_str();
    app.add_option("--include-center", cfg.include_center,
                   "Include the center node in the least-squares fit")
        ->capture_default_str();
    app.add_option("--solution", cfg.solution, "Exact solution preset (single-run)")
        ->check(CLI::IsMember({"u1", "u2", "u3"}))
        ->capture_default_str();
    app.add_option("--c1", cfg.c1, "Override the preset's first constant");
    app.add_option("--c2", cfg.c2, "Override the preset's second constant");
    app.add_option("--c3", cfg.c3, "Override the preset's third constant");
    app.add_option("--scheme", cfg.scheme, "Scheme for single-run")
        ->check(CLI::IsMember({"invariant", "noninvariant"}))
        ->capture_default_str();
    app.add_option("--mu-values", cfg.mu_values, "Non-invariant mu axis for sweep-mu")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--mu-inv-values", cfg.mu_inv_values,
                   "Invariant mu axis for sweep-mu; empty = automatic matching")
        ->delimiter(',');
    app.add_option("--r-values", cfg.r_values, "Radius axis for sweep-r")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--h-values", cfg.h_values, "Spacings for the convergence study")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--trajectory-stride", cfg.trajectory_stride,
                   "single-run: record every n-th state (0 = none)")
        ->capture_default_str();
    app.add_option("--threads", cfg.threads, "Concurrent realizations (0 = cores)")
        ->capture_default_str();
    app.add_option("--out", cfg.out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        (void)app.exit(e);
        return std::nullopt;
    } catch (const CLI::CallForAllHelp& e) {
        (void)app.exit(e);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw InvalidConfig(e.what());
    }
    validate(cfg);
    return cfg;
}

void write_config_echo(std::ostream& out, const RunConfig& c) {
    const auto raw = [&out](const char* key, const std::string& value) {
        out << key << " = " << value << "\n";
    };
    const auto str = [&out](const char* key, const std::string& value) {
        out << key << " = \"" << value << "\"\n";
    };
    str("command", c.command);
    raw("a", format_double(c.a));
    raw("b", format_double(c.b));
    raw("n-nodes", std::to_string(c.n_nodes));
    raw("jitter-frac", format_double(c.jitter_frac));
    raw("dt", format_double(c.dt));
    raw("n-steps", std::to_string(c.n_steps));
    std::string seeds;
    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
        if (i) seeds += ',';
        seeds += std::to_string(c.seeds[i]);
    }
    raw("seeds", seeds);
    raw("r", format_double(c.r));
    raw("mu-noninv", format_double(c.mu_noninv));
    str("mu-inv", c.mu_inv);
    raw("euler-period", std::to_string(c.euler_period));
    raw("include-center", c.include_center ? "true" : "false");
    str("solution", c.solution);
    if (c.c1) raw("c1", format_double(*c.c1));
    if (c.c2) raw("c2", format_double(*c.c2));
    if (c.c3) raw("c3", format_double(*c.c3));
    str("scheme", c.scheme);
    raw("mu-values", join_doubles(c.mu_values));
    if (!c.mu_inv_values.empty()) raw("mu-inv-values", join_doubles(c.mu_inv_values));
    raw("r-values", join_doubles(c.r_values));
    raw("h-values", join_doubles(c.h_values));
    raw("trajectory-stride", std::to_string(c.trajectory_stride));
    raw("threads", std::to_string(c.threads));
    str("out", c.out);
}

int dispatch(const RunConfig& cfg) {
    validate_solutions(cfg);
    const fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string() + ": " +
                        ec.message());
    {
        const fs::path path = dir / "config.echo";
        auto f = open_output(path);
        write_config_echo(f, cfg);
        finish_output(f, path);
    }
    if (cfg.command == "table1") return dispatch_table1(cfg, dir);
    if (cfg.command == "sweep-mu") return dispatch_sweep(cfg, dir, true);
    if (cfg.command == "sweep-r") return dispatch_sweep(cfg, dir, false);
    if (cfg.command == "convergence") return dispatch_convergence(cfg, dir);
    if (cfg.command == "single-run") return dispatch_single_run(cfg, dir);
    throw InvalidConfig("command: unknown command \"" + cfg.command + "\"");
}

int run_cli(int argc, const char* const* argv) {
    try {
        const std::optional<RunConfig> cfg = parse_config(argc, argv);
        if (!cfg) return 0;  // help was printed
        return dispatch(*cfg);
    } catch (const InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace imfd
