#include "imfd/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace imfd {

namespace {

constexpr double kDegenerate = 1e-14;  // relative threshold for a vanishing coefficient
constexpr double kPi = 3.141592653589793238462643383279502884;

std::complex<double> poly_eval(double a3, double a2, double a1, double a0,
                               std::complex<double> e) {
    return ((a3 * e + a2) * e + a1) * e + a0;
}

std::complex<double> poly_deriv(double a3, double a2, double a1,
                                std::complex<double> e) {
    return (3.0 * a3 * e + 2.0 * a2) * e + a1;
}

// Damped Newton refinement against the original polynomial. Closed-form
// cubic roots lose a few digits to cancellation; one or two corrected
// steps restore them without risking divergence (a step is halved until
// the residual does not grow).
std::complex<double> polish(double a3, double a2, double a1, double a0,
                            std::complex<double> e) {
    for (int iter = 0; iter < 2; ++iter) {
        const std::complex<double> p = poly_eval(a3, a2, a1, a0, e);
        const std::complex<double> dp = poly_deriv(a3, a2, a1, e);
        if (std::abs(dp) == 0.0) break;
        std::complex<double> step = p / dp;
        double res = std::abs(p);
        for (int halving = 0; halving < 4; ++halving) {
            const std::complex<double> trial = e - step;
            if (std::abs(poly_eval(a3, a2, a1, a0, trial)) <= res) {
                e = trial;
                break;
            }
            step *= 0.5;
        }
    }
    return e;
}

std::vector<CubicRoot> finalize(double a3, double a2, double a1, double a0,
                                std::vector<std::complex<double>> raw) {
    std::vector<CubicRoot> roots;
    roots.reserve(raw.size());
    for (std::complex<double> e : raw) {
        e = polish(a3, a2, a1, a0, e);
        // A polished root with negligible imaginary part is real; snap it
        // so callers can compare real roots exactly.
        if (std::abs(e.imag()) <= 1e-12 * (1.0 + std::abs(e.real()))) {
            e = std::complex<double>(e.real(), 0.0);
        }
        roots.push_back({e, std::abs(poly_eval(a3, a2, a1, a0, e))});
    }
    return roots;
}

std::vector<std::complex<double>> solve_linear(double a1, double a0) {
    if (a1 == 0.0) return {};  // constant polynomial: no roots
    return {std::complex<double>(-a0 / a1, 0.0)};
}

std::vector<std::complex<double>> solve_quadratic(double a2, double a1, double a0) {
    const double scale = std::max({std::abs(a1), std::abs(a0)});
    if (std::abs(a2) <= kDegenerate * scale || a2 == 0.0) {
        return solve_linear(a1, a0);
    }
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc >= 0.0) {
        // Citardauq pairing avoids cancellation between -a1 and the root.
        const double s = std::sqrt(disc);
        const double q = -0.5 * (a1 + std::copysign(s, a1));
        if (q == 0.0) {
            return {std::complex<double>(0.0, 0.0), std::complex<double>(-a1 / a2, 0.0)};
        }
        return {std::complex<double>(q / a2, 0.0), std::complex<double>(a0 / q, 0.0)};
    }
    const double re = -a1 / (2.0 * a2);
    const double im = std::sqrt(-disc) / (2.0 * a2);
    return {{re, im}, {re, -im}};
}

} // namespace

std::vector<CubicRoot> solve_cubic(double a3, double a2, double a1, double a0) {
    const double scale = std::max({std::abs(a2), std::abs(a1), std::abs(a0)});
    if (std::abs(a3) <= kDegenerate * scale || a3 == 0.0) {
        return finalize(a3, a2, a1, a0, solve_quadratic(a2, a1, a0));
    }

    // Depressed form: e = y - b/3 turns e^3 + b e^2 + c e + d into
    // y^3 + p y + q.
    const double b = a2 / a3;
    const double c = a1 / a3;
    const double d = a0 / a3;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;

    const double disc = 0.25 * q * q + p * p * p / 27.0;

    std::vector<std::complex<double>> raw;
    if (disc > 0.0) {
        // One real root (Cardano). Pick the cube root that avoids
        // cancellation and recover the partner from u*v = -p/3.
        const double s = std::sqrt(disc);
        const double A = (q <= 0.0) ? (-0.5 * q + s) : (-0.5 * q - s);
        const double u = std::cbrt(A);
        const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
        const double y1 = u + v;
        const double re = -0.5 * y1;
        const double im = 0.5 * std::sqrt(3.0) * (u - v);
        raw = {{y1 + shift, 0.0}, {re + shift, im}, {re + shift, -im}};
    } else if (p == 0.0 && q == 0.0) {
        raw = {{shift, 0.0}, {shift, 0.0}, {shift, 0.0}};  // triple root
    } else {
        // Three real roots: trigonometric method.
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        raw.reserve(3);
        for (int k = 0; k < 3; ++k) {
            raw.emplace_back(m * std::cos(theta - 2.0 * kPi * k / 3.0) + shift, 0.0);
        }
    }
    return finalize(a3, a2, a1, a0, raw);
}

} // namespace imfd
