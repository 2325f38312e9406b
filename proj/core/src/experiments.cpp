#include "imfd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <thread>

#include "imfd/errors.hpp"
#include "imfd/stencil.hpp"
#include "imfd/symmetry.hpp"

namespace imfd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (n % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

// Runs count independent jobs on up to `threads` workers. Results must be
// written to preassigned slots so assembly order never depends on
// completion order; jobs must not throw.
void run_jobs(std::size_t count, std::size_t threads,
              const std::function<void(std::size_t)>& job) {
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                job(i);
            }
        });
    }
}

double mean_converged(const std::vector<RealizationResult>& results,
                      std::size_t& n_converged) {
    double sum = 0.0;
    n_converged = 0;
    for (const RealizationResult& r : results) {
        if (r.converged) {
            sum += r.rmse;
            ++n_converged;
        }
    }
    return n_converged > 0 ? sum / static_cast<double>(n_converged) : kNaN;
}

SweepRow aggregate_row(const std::string& scheme, double param,
                       const std::vector<RealizationResult>& results) {
    std::size_t n_converged = 0;
    const double mean = mean_converged(results, n_converged);
    // An ensemble point counts as converged when more than half of its
    // realizations completed; the rmse averages exactly those (NaN when none).
    const bool converged = 2 * n_converged > results.size();
    return {scheme, param, mean, converged};
}

std::string scheme_label(SchemeKind kind) {
    return kind == SchemeKind::invariant ? "invariant" : "noninvariant";
}

// Ensemble of one (scheme, parameter) combination: all seeds, parallel.
std::vector<RealizationResult> run_ensemble(const HarnessConfig& config,
                                            const ExactSolution& sol,
                                            SchemeKind kind) {
    std::vector<RealizationResult> results(config.seeds.size());
    run_jobs(config.seeds.size(), config.threads, [&](std::size_t i) {
        results[i] = run_realization(config, sol, kind, config.seeds[i]);
    });
    return results;
}

} // namespace

double rmse(const std::vector<double>& numeric, const std::vector<double>& exact) {
    if (numeric.size() != exact.size() || numeric.empty()) {
        throw Error("rmse: length mismatch (" + std::to_string(numeric.size()) + " vs " +
                    std::to_string(exact.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        const double d = numeric[i] - exact[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(numeric.size()));
}

double mu_matching(const NodeSet& nodes, const std::vector<double>& values,
                   double r, double mu_noninv, bool include_center) {
    std::vector<double> phys_sq, inv_sq;
    std::vector<double> positions;
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        const Neighborhood neigh = find_neighbors(nodes, i, r, include_center);
        positions.clear();
        for (std::size_t j : neigh.neighbor_indices) {
            positions.push_back(nodes.positions[j]);
        }
        InvariantizedStencil inv;
        try {
            const auto [left, right] = nearest_flanking(nodes, i);
            const DiscreteFrame frame = discrete_frame(
                nodes.positions[left], values[left], nodes.positions[i], values[i],
                nodes.positions[right], values[right], positions);
            inv = invariantize_stencil(frame, nodes.positions[i], neigh, nodes, values,
                                       0.0, 0.0);
        } catch (const Error&) {
            continue;  // no frame here; this stencil contributes to neither pool
        }
        for (double d : neigh.offsets) {
            if (d != 0.0) phys_sq.push_back(d * d);
        }
        for (double d : inv.offsets) {
            if (d != 0.0) inv_sq.push_back(d * d);
        }
    }
    if (phys_sq.empty() || inv_sq.empty()) {
        return mu_noninv;  // no usable frames: identical weights is the safe default
    }
    return mu_noninv * median(std::move(phys_sq)) / median(std::move(inv_sq));
}

RealizationResult run_realization(const HarnessConfig& config,
                                  const ExactSolution& sol, SchemeKind kind,
                                  std::uint64_t seed) {
    RealizationResult res;
    res.seed = seed;
    res.rmse = kNaN;
    try {
        const NodeSet nodes = build_perturbed_grid(config.a, config.b, config.n_nodes,
                                                   config.jitter_frac, seed);
        std::vector<double> u0(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            u0[j] = eval(sol, 0.0, nodes.positions[j]);
        }
        const BoundaryOracle oracle = [&sol](double t, double x) {
            return eval(sol, t, x);
        };

        double mu = config.mu_noninv;
        if (kind == SchemeKind::invariant) {
            mu = config.mu_inv ? *config.mu_inv
                               : mu_matching(nodes, u0, config.r, config.mu_noninv,
                                             config.include_center);
        }
        res.mu_used = mu;

        SchemeConfig sc;
        sc.r = config.r;
        sc.mu = mu;
        sc.euler_period = config.euler_period;
        sc.include_center = config.include_center;
        sc.kind = kind;

        const IntegrationResult out =
            integrate(nodes, u0, oracle, config.n_steps, config.dt, sc);

        std::vector<double> exact(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            exact[j] = eval(sol, out.state.t, nodes.positions[j]);
        }
        res.rmse = rmse(out.state.curr, exact);
        res.converged = true;
    } catch (const Error& e) {
        res.converged = false;
        res.error = e.what();
    }
    return res;
}

std::vector<ExperimentReport> run_table1(const HarnessConfig& config) {
    const SolutionKind kinds[] = {SolutionKind::u1, SolutionKind::u2, SolutionKind::u3};

    // One job per (solution, scheme, seed); slotted so report assembly is
    // independent of completion order.
    const std::size_t n_seeds = config.seeds.size();
    std::vector<RealizationResult> slots(3 * 2 * n_seeds);
    std::vector<ExactSolution> sols;
    sols.reserve(3);
    for (SolutionKind k : kinds) sols.push_back(preset_solution(k));

    run_jobs(slots.size(), config.threads, [&](std::size_t i) {
        const std::size_t sol_i = i / (2 * n_seeds);
        const std::size_t scheme_i = (i / n_seeds) % 2;
        const std::size_t seed_i = i % n_seeds;
        const SchemeKind kind =
            scheme_i == 0 ? SchemeKind::noninvariant : SchemeKind::invariant;
        slots[i] = run_realization(config, sols[sol_i], kind, config.seeds[seed_i]);
    });

    std::vector<ExperimentReport> reports;
    reports.reserve(3);
    for (std::size_t sol_i = 0; sol_i < 3; ++sol_i) {
        ExperimentReport rep;
        rep.solution = solution_name(kinds[sol_i]);
        const std::size_t base = sol_i * 2 * n_seeds;
        rep.noninv.assign(slots.begin() + base, slots.begin() + base + n_seeds);
        rep.inv.assign(slots.begin() + base + n_seeds, slots.begin() + base + 2 * n_seeds);
        rep.rmse_nis = mean_converged(rep.noninv, rep.n_converged_nis);
        rep.rmse_is = mean_converged(rep.inv, rep.n_converged_is);
        rep.ratio_percent = 100.0 * rep.rmse_is / rep.rmse_nis;
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<SweepRow> sweep_mu(const HarnessConfig& config,
                               const std::vector<double>& mu_noninv_values,
                               const std::vector<double>& mu_inv_values) {
    const ExactSolution sol = preset_solution(SolutionKind::u1);
    std::vector<SweepRow> rows;

    for (double mu : mu_noninv_values) {
        HarnessConfig point = config;
        point.mu_noninv = mu;
        rows.push_back(aggregate_row(scheme_label(SchemeKind::noninvariant), mu,
                                     run_ensemble(point, sol, SchemeKind::noninvariant)));
    }
    if (mu_inv_values.empty()) {
        // Automatic axis: invariant mu matched per realization from the
        // corresponding non-invariant value.
        for (double mu : mu_noninv_values) {
            HarnessConfig point = config;
            point.mu_noninv = mu;
            point.mu_inv.reset();
            rows.push_back(aggregate_row(scheme_label(SchemeKind::invariant), mu,
                                         run_ensemble(point, sol, SchemeKind::invariant)));
        }
    } else {
        for (double mu : mu_inv_values) {
            HarnessConfig point = config;
            point.mu_inv = mu;
            rows.push_back(aggregate_row(scheme_label(SchemeKind::invariant), mu,
                                         run_ensemble(point, sol, SchemeKind::invariant)));
        }
    }
    return rows;
}

std::vector<SweepRow> sweep_r(const HarnessConfig& config,
                              const std::vector<double>& r_values) {
    const ExactSolution sol = preset_solution(SolutionKind::u1);
    std::vector<SweepRow> rows;
    for (SchemeKind kind : {SchemeKind::noninvariant, SchemeKind::invariant}) {
        for (double r : r_values) {
            HarnessConfig point = config;
            point.r = r;
            rows.push_back(
                aggregate_row(scheme_label(kind), r, run_ensemble(point, sol, kind)));
        }
    }
    return rows;
}

ConvergenceReport run_convergence(const std::vector<double>& h_values, double mu) {
    const double xc = 1.5;
    ConvergenceReport report;
    for (double h : h_values) {
        // Asymmetric 4-point stencil: a symmetric one superconverges and
        // would hide the generic orders.
        const std::vector<double> offsets = {-h, 0.0, h, 2.0 * h};
        std::vector<double> values;
        values.reserve(offsets.size());
        for (double d : offsets) values.push_back(std::sin(xc + d));
        const DerivativeEstimate est =
            solve_weighted_lsq(assemble_offsets(offsets, values, mu, 2.0 * h));
        report.points.push_back({h, std::abs(est.ux - std::cos(xc)),
                                 std::abs(est.uxx + std::sin(xc))});
    }

    // Log-log least-squares slopes.
    const auto fit_slope = [&](bool second) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(report.points.size());
        for (const ConvergencePoint& p : report.points) {
            const double lx = std::log(p.h);
            const double ly = std::log(second ? p.err_uxx : p.err_ux);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    report.slope_ux = fit_slope(false);
    report.slope_uxx = fit_slope(true);
    return report;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_table1_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
    out << "solution,scheme,seed,rmse,converged\n";
    for (const ExperimentReport& rep : reports) {
        for (const auto* series : {&rep.noninv, &rep.inv}) {
            const std::string scheme =
                series == &rep.noninv ? "noninvariant" : "invariant";
            for (const RealizationResult& r : *series) {
                out << rep.solution << ',' << scheme << ',' << r.seed << ','
                    << format_double(r.rmse) << ',' << (r.converged ? 1 : 0) << '\n';
            }
        }
    }
}

void write_summary(std::ostream& out, const std::vector<ExperimentReport>& reports) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %12s %12s %22s %12s\n", "solution",
                  "rmse_nis", "rmse_is", "rmse_is/rmse_nis*100", "converged");
    out << line;
    for (const ExperimentReport& rep : reports) {
        char ratio[32];
        if (std::isnan(rep.ratio_percent)) {
            std::snprintf(ratio, sizeof(ratio), "n/a");
        } else {
            std::snprintf(ratio, sizeof(ratio), "%.1f%%", rep.ratio_percent);
        }
        char conv[32];
        std::snprintf(conv, sizeof(conv), "%zu/%zu", rep.n_converged_nis + rep.n_converged_is,
                      rep.noninv.size() + rep.inv.size());
        std::snprintf(line, sizeof(line), "%-10s %12.3e %12.3e %22s %12s\n",
                      rep.solution.c_str(), rep.rmse_nis, rep.rmse_is, ratio, conv);
        out << line;
    }
}

void write_sweep_csv(std::ostream& out, const std::string& param_name,
                     const std::vector<SweepRow>& rows) {
    out << "scheme," << param_name << ",rmse,converged\n";
    for (const SweepRow& row : rows) {
        out << row.scheme << ',' << format_double(row.param) << ','
            << format_double(row.rmse) << ',' << (row.converged ? 1 : 0) << '\n';
    }
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "h,err_ux,err_uxx\n";
    for (const ConvergencePoint& p : report.points) {
        out << format_double(p.h) << ',' << format_double(p.err_ux) << ','
            << format_double(p.err_uxx) << '\n';
    }
}

} // namespace imfd
