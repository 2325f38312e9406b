#include "imfd/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imfd/cubic.hpp"
#include "imfd/errors.hpp"

namespace imfd {

namespace {

double pole_factor(double eps5, double x) {
    const double f = 1.0 - eps5 * x;
    if (f == 0.0) {
        throw PoleHit("group action pole: 1 - eps5*x = 0 at x=" + std::to_string(x) +
                      ", eps5=" + std::to_string(eps5));
    }
    return f;
}

} // namespace

ActionPoint apply_group(const GroupElement& g, double t, double x, double u) {
    const double f = pole_factor(g.eps5, x);
    ActionPoint out;
    out.t = std::exp(2.0 * g.eps3) * (t + g.eps1);
    out.x = std::exp(g.eps3 + 2.0 * g.eps4) * (x / f + g.eps2);
    out.u = std::exp(-3.0 * g.eps4) * f * f * f * u;
    return out;
}

ProlongedPoint apply_group_prolonged(const GroupElement& g, double t, double x,
                                     double u, double ut, double ux) {
    const double f = pole_factor(g.eps5, x);
    const ActionPoint base = apply_group(g, t, x, u);
    ProlongedPoint out;
    out.t = base.t;
    out.x = base.x;
    out.u = base.u;
    // Chain rule through T = T(t), X = X(x), U = U(x, u):
    //   U_T = (dU/dt) / (dT/dt) with x held fixed,
    //   U_X = (dU/dx + dU/du * u_x) / (dX/dx) with t held fixed.
    out.ut = std::exp(-2.0 * g.eps3 - 3.0 * g.eps4) * f * f * f * ut;
    out.ux = std::exp(-g.eps3 - 5.0 * g.eps4) * f * f * f * f *
             (f * ux - 3.0 * g.eps5 * u);
    return out;
}

ActionPoint compose_check(const GroupElement& g, const GroupElement& h,
                          double t, double x, double u) {
    const ActionPoint inner = apply_group(h, t, x, u);
    return apply_group(g, inner.t, inner.x, inner.u);
}

GroupElement continuous_frame(double t, double x, double u, double ut, double ux) {
    if (!(u > 0.0)) {
        throw FrameUndefined("continuous_frame: requires u > 0, got u=" +
                             std::to_string(u));
    }
    if (!(ut / u > 0.0)) {
        throw FrameUndefined("continuous_frame: requires u_t/u > 0, got u_t=" +
                             std::to_string(ut));
    }
    if (ux == 0.0) {
        throw FrameUndefined("continuous_frame: requires u_x != 0");
    }
    const double denom = x * ux + 3.0 * u;
    if (!(denom > 0.0)) {
        throw FrameUndefined("continuous_frame: requires x*u_x + 3u > 0, got " +
                             std::to_string(denom));
    }

    GroupElement g;
    g.eps1 = -t;
    g.eps2 = -(x * x * ux + 3.0 * x * u) / (3.0 * u);
    g.eps3 = 0.5 * std::log(ut / u);
    g.eps4 = std::log(3.0 * std::pow(u, 4.0 / 3.0) / denom);
    g.eps5 = ux / denom;
    return g;
}

std::array<double, 4> cubic_coefficients(double xl, double ul, double xr, double ur) {
    const double inv = 1.0 / (xr - xl);
    return {
        (ur * xr * xr * xr - ul * xl * xl * xl) * inv,
        -3.0 * (ur * xr * xr - ul * xl * xl) * inv,
        3.0 * (ur * xr - ul * xl) * inv,
        -(ur - ul) * inv,
    };
}

DiscreteFrame discrete_frame(double xl, double ul, double xc, double uc,
                             double xr, double ur,
                             std::span<const double> stencil_positions) {
    const auto [a3, a2, a1, a0] = cubic_coefficients(xl, ul, xr, ur);
    const std::vector<CubicRoot> roots = solve_cubic(a3, a2, a1, a0);

    // Pole filter: a real root whose map degenerates on any stencil node
    // belongs to the spurious 1/x family. The threshold is scale-aware so
    // eps5 = 0 (margin 1, scale 0) is never rejected.
    struct Candidate {
        double eps5;
        double margin;
    };
    std::vector<Candidate> admissible;
    bool saw_real = false;
    for (const CubicRoot& root : roots) {
        if (!root.is_real()) continue;
        saw_real = true;
        const double e = root.value.real();
        double margin = std::numeric_limits<double>::infinity();
        double scale = 0.0;
        for (double xj : stencil_positions) {
            margin = std::min(margin, std::abs(1.0 - e * xj));
            scale = std::max(scale, std::abs(e * xj));
        }
        if (margin >= 1e-6 * scale) {
            admissible.push_back({e, margin});
        }
    }
    if (admissible.empty()) {
        throw NoAdmissibleRoot(saw_real
                                   ? "discrete_frame: every real root hits a stencil pole"
                                   : "discrete_frame: frame cubic has no real root");
    }

    std::size_t pick = 0;
    if (admissible.size() > 1) {
        // Tie-break by compatibility with the continuous frame: target the
        // predictor built from the centered difference of the flanking
        // values. If the predictor degenerates (x u_x + 3u = 0 cannot
        // happen for positive data, but guard anyway) prefer the smallest
        // transformation.
        const double uxd = (ur - ul) / (xr - xl);
        const double denom = xc * uxd + 3.0 * uc;
        const double target = (denom != 0.0 && std::isfinite(denom)) ? uxd / denom : 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < admissible.size(); ++i) {
            const double dist = std::abs(admissible[i].eps5 - target);
            if (dist < best) {
                best = dist;
                pick = i;
            }
        }
    }
    return {admissible[pick].eps5, admissible[pick].margin};
}

InvariantizedStencil invariantize_stencil(const DiscreteFrame& frame, double xc,
                                          const Neighborhood& neigh,
                                          const NodeSet& nodes,
                                          const std::vector<double>& values,
                                          double u_hat, double u_check) {
    const double fc = pole_factor(frame.eps5, xc);
    const double fc3 = fc * fc * fc;
    const double iota_xc = xc / fc;

    InvariantizedStencil inv;
    inv.offsets.reserve(neigh.k());
    inv.values.reserve(neigh.k());
    for (std::size_t j = 0; j < neigh.k(); ++j) {
        const std::size_t node = neigh.neighbor_indices[j];
        const double xj = nodes.positions[node];
        const double fj = pole_factor(frame.eps5, xj);
        inv.offsets.push_back(xj / fj - iota_xc);
        inv.values.push_back(fj * fj * fj * values[node]);
    }
    inv.u = fc3 * values[neigh.center];
    inv.u_hat = fc3 * u_hat;
    inv.u_check = fc3 * u_check;
    inv.center_factor = fc3;
    return inv;
}

} // namespace imfd
