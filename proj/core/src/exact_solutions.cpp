#include "imfd/exact_solutions.hpp"

#include <cmath>
#include <string>

#include "imfd/errors.hpp"

namespace imfd {

namespace {

double inner_expression(const ExactSolution& sol, double t, double x) {
    switch (sol.kind) {
    case SolutionKind::u1:
        return 2.0 * sol.c1 * x - 3.0 * sol.c1 * sol.c1 * t + sol.c2;
    case SolutionKind::u2:
        return (x + sol.c1) * (x + sol.c1) / (t + sol.c2) +
               sol.c3 * (t + sol.c2) * (t + sol.c2);
    case SolutionKind::u3:
        return sol.c1 * x + sol.c2;
    }
    return 0.0;
}

} // namespace

SolutionKind solution_kind_from_name(const std::string& name) {
    if (name == "u1") return SolutionKind::u1;
    if (name == "u2") return SolutionKind::u2;
    if (name == "u3") return SolutionKind::u3;
    throw InvalidConfig("unknown solution preset '" + name + "' (expected u1, u2 or u3)");
}

std::string solution_name(SolutionKind kind) {
    switch (kind) {
    case SolutionKind::u1: return "u1";
    case SolutionKind::u2: return "u2";
    case SolutionKind::u3: return "u3";
    }
    return "?";
}

double ExactSolution::operator()(double t, double x) const {
    return eval(*this, t, x);
}

double eval(const ExactSolution& sol, double t, double x) {
    if (sol.kind == SolutionKind::u2 && t + sol.c2 == 0.0) {
        throw OutOfDomain("u2 evaluated at t = -c2 (pole of the inner expression)");
    }
    const double inner = inner_expression(sol, t, x);
    if (!(inner > 0.0)) {
        throw OutOfDomain(solution_name(sol.kind) + " inner expression " +
                          std::to_string(inner) + " <= 0 at t=" + std::to_string(t) +
                          ", x=" + std::to_string(x));
    }
    switch (sol.kind) {
    case SolutionKind::u1:
    case SolutionKind::u2:
        return std::pow(inner, -0.75);
    case SolutionKind::u3:
        return 1.0 / (inner * inner * inner);
    }
    return 0.0;
}

ExactSolution make_exact_solution(SolutionKind kind, double c1, double c2,
                                  double c3, const SpaceTimeBox& box) {
    ExactSolution sol{kind, c1, c2, c3};
    // The inner expressions are affine in (t, x) for u1/u3 and smooth with
    // at most one interior extremum in t for u2, so corners plus a modest
    // sampling sweep certify positivity on the whole box.
    const std::size_t nt = 33, nx = 33;
    for (std::size_t it = 0; it < nt; ++it) {
        const double t = box.t0 + (box.t1 - box.t0) * static_cast<double>(it) /
                                      static_cast<double>(nt - 1);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = box.a + (box.b - box.a) * static_cast<double>(ix) /
                                         static_cast<double>(nx - 1);
            const double u = eval(sol, t, x);  // raises OutOfDomain on bad boxes
            if (!std::isfinite(u)) {
                throw OutOfDomain(solution_name(kind) + " non-finite at t=" +
                                  std::to_string(t) + ", x=" + std::to_string(x));
            }
        }
    }
    return sol;
}

ExactSolution preset_solution(SolutionKind kind) {
    const SpaceTimeBox box{1.0, 2.0, 0.0, 1.0};
    switch (kind) {
    case SolutionKind::u1:
        return make_exact_solution(SolutionKind::u1, 0.1, 0.1, 0.0, box);
    case SolutionKind::u2:
        return make_exact_solution(SolutionKind::u2, 0.0, 10.0, 0.0, box);
    case SolutionKind::u3:
        return make_exact_solution(SolutionKind::u3, 0.1, 0.1, 0.0, box);
    }
    throw InvalidConfig("preset_solution: bad kind");
}

double verify_pde_residual(const std::function<double(double, double)>& u,
                           const std::vector<std::pair<double, double>>& points,
                           double h_fd) {
    const double h = h_fd;
    double worst = 0.0;
    for (const auto& [t, x] : points) {
        // Fourth-order central differences for u_t, u_x and u_xx.
        const double ut = (-u(t + 2 * h, x) + 8 * u(t + h, x) - 8 * u(t - h, x) +
                           u(t - 2 * h, x)) /
                          (12 * h);
        const double ux = (-u(t, x + 2 * h) + 8 * u(t, x + h) - 8 * u(t, x - h) +
                           u(t, x - 2 * h)) /
                          (12 * h);
        const double uxx = (-u(t, x + 2 * h) + 16 * u(t, x + h) - 30 * u(t, x) +
                            16 * u(t, x - h) - u(t, x - 2 * h)) /
                           (12 * h * h);
        // (u^{-4/3} u_x)_x expanded with analytic diffusivity derivatives.
        const double uc = u(t, x);
        const double flux_div = -(4.0 / 3.0) * std::pow(uc, -7.0 / 3.0) * ux * ux +
                                std::pow(uc, -4.0 / 3.0) * uxx;
        worst = std::max(worst, std::abs(ut - flux_div));
    }
    return worst;
}

double verify_pde_residual(const ExactSolution& sol,
                           const std::vector<std::pair<double, double>>& points,
                           double h_fd) {
    return verify_pde_residual(
        [&sol](double t, double x) { return eval(sol, t, x); }, points, h_fd);
}

std::vector<std::pair<double, double>> box_samples(const SpaceTimeBox& box,
                                                   std::size_t nt, std::size_t nx,
                                                   double margin) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(nt * nx);
    const double t0 = box.t0 + margin, t1 = box.t1 - margin;
    const double a = box.a + margin, b = box.b - margin;
    for (std::size_t it = 0; it < nt; ++it) {
        const double t = t0 + (t1 - t0) * static_cast<double>(it) /
                                  static_cast<double>(nt - 1);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = a + (b - a) * static_cast<double>(ix) /
                                     static_cast<double>(nx - 1);
            pts.emplace_back(t, x);
        }
    }
    return pts;
}

} // namespace imfd
