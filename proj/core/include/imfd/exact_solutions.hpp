#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace imfd {

enum class SolutionKind { u1, u2, u3 };

SolutionKind solution_kind_from_name(const std::string& name);
std::string solution_name(SolutionKind kind);

/**
 * ExactSolution: one of the closed-form solutions of
 * u_t = (u^{-4/3} u_x)_x used as initial data, Dirichlet oracle, and
 * error reference:
 *
 *   u1 = (2 c1 x - 3 c1^2 t + c2)^{-3/4}
 *   u2 = ((x + c1)^2/(t + c2) + c3 (t + c2)^2)^{-3/4}
 *   u3 = (c1 x + c2)^{-3}              (stationary)
 *
 * Instances built through make_exact_solution are verified positive and
 * finite on their space-time box.
 */
struct ExactSolution {
    SolutionKind kind = SolutionKind::u1;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    double operator()(double t, double x) const;
};

struct SpaceTimeBox {
    double a = 1.0;
    double b = 2.0;
    double t0 = 0.0;
    double t1 = 1.0;
};

// Evaluation; raises OutOfDomain when the inner expression is <= 0.
double eval(const ExactSolution& sol, double t, double x);

// Constructs and validates a solution on the box: corner checks plus a
// sampling sweep of the inner expression's sign, so a run cannot hit a
// singularity mid-integration.
ExactSolution make_exact_solution(SolutionKind kind, double c1, double c2,
                                  double c3, const SpaceTimeBox& box);

// The shipped constants: u1 and u3 with c1 = c2 = 0.1, u2 with
// c1 = c3 = 0 and c2 = 10, all on [1,2] x [0,1].
ExactSolution preset_solution(SolutionKind kind);

// Max |u_t - (u^{-4/3} u_x)_x| over the sample points, with the
// derivatives evaluated by fourth-order central finite differences of
// step h_fd. The callable overload lets tests feed deliberately corrupted
// fields as a negative control.
double verify_pde_residual(const std::function<double(double, double)>& u,
                           const std::vector<std::pair<double, double>>& points,
                           double h_fd = 5e-3);
double verify_pde_residual(const ExactSolution& sol,
                           const std::vector<std::pair<double, double>>& points,
                           double h_fd = 5e-3);

// Uniform (t, x) sample grid of a box, inset by margin on every side so
// finite-difference probes stay inside the domain.
std::vector<std::pair<double, double>> box_samples(const SpaceTimeBox& box,
                                                   std::size_t nt, std::size_t nx,
                                                   double margin);

} // namespace imfd
