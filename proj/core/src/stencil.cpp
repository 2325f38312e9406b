#include "imfd/stencil.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "imfd/errors.hpp"

namespace imfd {

namespace {

constexpr double kRcondFloor = 1e-12;

TaylorSystem make_system(const std::vector<double>& offsets,
                         const std::vector<double>& neighbor_values,
                         double mu, double r) {
    TaylorSystem sys;
    sys.offsets = offsets;
    sys.rhs = neighbor_values;
    sys.radius = r;
    sys.weights.reserve(offsets.size());
    const double inv_r2 = 1.0 / (r * r);
    for (double d : offsets) {
        sys.weights.push_back(std::exp(-mu * d * d * inv_r2));
    }
    return sys;
}

} // namespace

TaylorSystem assemble(const Neighborhood& neigh,
                      const std::vector<double>& values, double mu) {
    std::vector<double> b;
    b.reserve(neigh.k());
    for (std::size_t j : neigh.neighbor_indices) {
        b.push_back(values.at(j));
    }
    return make_system(neigh.offsets, b, mu, neigh.radius);
}

TaylorSystem assemble_offsets(const std::vector<double>& offsets,
                              const std::vector<double>& neighbor_values,
                              double mu, double r) {
    if (offsets.size() != neighbor_values.size()) {
        throw Error("assemble_offsets: offsets and values length mismatch");
    }
    return make_system(offsets, neighbor_values, mu, r);
}

DerivativeEstimate solve_weighted_lsq(const TaylorSystem& sys) {
    const std::size_t k = sys.offsets.size();
    if (k < 4) {
        throw InsufficientStencil("solve_weighted_lsq: k=" + std::to_string(k) +
                                  " rows, need >= 4");
    }

    // Work with scaled offsets d = dx / r. The model columns become
    // (1, d, d^2/2, d^3/6); the solved coefficients are the derivatives
    // times r^order and are unscaled on exit. This is exact algebra, not
    // an approximation, and keeps the 4x4 normal matrix O(1).
    const double inv_r = 1.0 / sys.radius;
    Eigen::Matrix4d normal = Eigen::Matrix4d::Zero();
    Eigen::Vector4d moment = Eigen::Vector4d::Zero();
    for (std::size_t j = 0; j < k; ++j) {
        const double d = sys.offsets[j] * inv_r;
        const double w = sys.weights[j];
        Eigen::Vector4d row(1.0, d, 0.5 * d * d, d * d * d / 6.0);
        normal.noalias() += w * row * row.transpose();
        moment.noalias() += (w * sys.rhs[j]) * row;
    }

    Eigen::FullPivLU<Eigen::Matrix4d> lu(normal);
    if (!lu.isInvertible() || lu.rcond() < kRcondFloor) {
        throw SingularStencil("solve_weighted_lsq: normal matrix rank-deficient (rcond=" +
                              std::to_string(lu.rcond()) + ")");
    }
    const Eigen::Vector4d y = lu.solve(moment);

    DerivativeEstimate est;
    est.u0_fit = y(0);
    est.ux = y(1) * inv_r;
    est.uxx = y(2) * inv_r * inv_r;
    est.uxxx = y(3) * inv_r * inv_r * inv_r;
    if (!std::isfinite(est.u0_fit) || !std::isfinite(est.ux) ||
        !std::isfinite(est.uxx) || !std::isfinite(est.uxxx)) {
        throw SingularStencil("solve_weighted_lsq: non-finite solution");
    }
    return est;
}

std::vector<DerivativeEstimate> derivative_field(const NodeSet& nodes,
                                                 const std::vector<double>& values,
                                                 double r, double mu,
                                                 bool include_center) {
    if (values.size() != nodes.size()) {
        throw Error("derivative_field: values length " + std::to_string(values.size()) +
                    " does not match node count " + std::to_string(nodes.size()));
    }
    std::vector<DerivativeEstimate> field;
    field.reserve(nodes.size() - 2);
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        try {
            const Neighborhood neigh = find_neighbors(nodes, i, r, include_center);
            field.push_back(solve_weighted_lsq(assemble(neigh, values, mu)));
        } catch (const InsufficientStencil& e) {
            throw InsufficientStencil("node " + std::to_string(i) + ": " + e.what());
        } catch (const SingularStencil& e) {
            throw SingularStencil("node " + std::to_string(i) + ": " + e.what());
        }
    }
    return field;
}

} // namespace imfd
