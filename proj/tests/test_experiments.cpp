#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "imfd/errors.hpp"
#include "imfd/exact_solutions.hpp"
#include "imfd/experiments.hpp"
#include "imfd/geometry.hpp"

namespace {

// Small-but-real harness: enough steps to integrate meaningfully, few
// enough to keep the suite fast.
imfd::HarnessConfig quick_config() {
    imfd::HarnessConfig config;
    config.n_steps = 50;
    config.seeds = {1, 2};
    return config;
}

std::vector<double> sample_initial(const imfd::NodeSet& nodes,
                                   const imfd::ExactSolution& sol) {
    std::vector<double> values;
    for (double x : nodes.positions) values.push_back(imfd::eval(sol, 0.0, x));
    return values;
}

} // namespace

TEST_CASE("rmse averages squared errors over all nodes") {
    CHECK(imfd::rmse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    // Differences (1, 2): sqrt((1 + 4)/2) = sqrt(2.5)
    CHECK(imfd::rmse({0.0, 0.0}, {1.0, 2.0}) ==
          doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
    CHECK(imfd::rmse({2.0}, {-1.0}) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(imfd::rmse({1.0}, {1.0, 2.0}), imfd::Error);
}

TEST_CASE("mu matching is the identity on symmetric data") {
    // On a uniform grid with constant values every frame is eps5 = 0, so
    // the invariantized offsets equal the physical ones and the matched
    // mu is exactly the non-invariant one.
    const auto nodes = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.0, 0);
    const std::vector<double> values(nodes.size(), 2.0);
    const double matched = imfd::mu_matching(nodes, values, 0.2564, 1.0);
    CHECK(matched == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mu matching compensates the frame's offset compression") {
    const auto nodes = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 1);

    // The traveling profile's frame mildly compresses offsets.
    const auto u1 = imfd::preset_solution(imfd::SolutionKind::u1);
    const double m1 = imfd::mu_matching(nodes, sample_initial(nodes, u1), 0.2564, 1.0);
    CHECK(m1 > 1.5);
    CHECK(m1 < 4.0);

    // The separable profile compresses much harder.
    const auto u2 = imfd::preset_solution(imfd::SolutionKind::u2);
    const double m2 = imfd::mu_matching(nodes, sample_initial(nodes, u2), 0.2564, 1.0);
    CHECK(m2 > 10.0);
    CHECK(m2 < 22.0);

    // Scaling mu_noninv scales the match linearly.
    const double m1_scaled =
        imfd::mu_matching(nodes, sample_initial(nodes, u1), 0.2564, 2.0);
    CHECK(m1_scaled == doctest::Approx(2.0 * m1).epsilon(1e-12));
}

TEST_CASE("run_realization reproduces the stationary equilibrium split") {
    auto config = quick_config();
    config.n_steps = 200;
    const auto sol = imfd::preset_solution(imfd::SolutionKind::u3);

    const auto inv = imfd::run_realization(config, sol, imfd::SchemeKind::invariant, 1);
    CHECK(inv.converged);
    CHECK(inv.seed == 1);
    CHECK(inv.rmse < 1e-10);
    CHECK(inv.mu_used == 5.0);  // fixed default
    CHECK(inv.error.empty());

    const auto noninv =
        imfd::run_realization(config, sol, imfd::SchemeKind::noninvariant, 1);
    CHECK(noninv.converged);
    CHECK(noninv.mu_used == 1.0);
    CHECK(noninv.rmse > 1e-5);
    CHECK(noninv.rmse < 1e-2);
}

TEST_CASE("run_realization resolves automatic mu matching per grid") {
    auto config = quick_config();
    config.n_steps = 10;
    config.mu_inv.reset();  // automatic matching
    const auto sol = imfd::preset_solution(imfd::SolutionKind::u1);
    const auto res = imfd::run_realization(config, sol, imfd::SchemeKind::invariant, 1);
    CHECK(res.converged);

    const auto nodes = imfd::build_perturbed_grid(1.0, 2.0, 40, 0.1, 1);
    const double expected =
        imfd::mu_matching(nodes, sample_initial(nodes, sol), config.r, config.mu_noninv);
    CHECK(res.mu_used == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("run_realization captures failures instead of throwing") {
    auto config = quick_config();
    config.r = 0.01;  // no stencil can form
    const auto sol = imfd::preset_solution(imfd::SolutionKind::u1);
    const auto res = imfd::run_realization(config, sol, imfd::SchemeKind::noninvariant, 1);
    CHECK(!res.converged);
    CHECK(std::isnan(res.rmse));
    CHECK(!res.error.empty());
}

TEST_CASE("run_table1 orders reports and aggregates converged runs") {
    auto config = quick_config();
    const auto reports = imfd::run_table1(config);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].solution == "u1");
    CHECK(reports[1].solution == "u2");
    CHECK(reports[2].solution == "u3");
    for (const auto& rep : reports) {
        REQUIRE(rep.noninv.size() == config.seeds.size());
        REQUIRE(rep.inv.size() == config.seeds.size());
        CHECK(rep.n_converged_nis == config.seeds.size());
        CHECK(rep.n_converged_is == config.seeds.size());
        CHECK(rep.rmse_nis > 0.0);
        CHECK(rep.rmse_is >= 0.0);  // exactly zero for the stationary preset
        CHECK(rep.ratio_percent ==
              doctest::Approx(100.0 * rep.rmse_is / rep.rmse_nis).epsilon(1e-12));
        for (std::size_t k = 0; k < config.seeds.size(); ++k) {
            CHECK(rep.noninv[k].seed == config.seeds[k]);
            CHECK(rep.inv[k].seed == config.seeds[k]);
        }
        // Aggregates equal the mean over (all-converged) realizations.
        double mean_n = 0.0, mean_i = 0.0;
        for (const auto& r : rep.noninv) mean_n += r.rmse;
        for (const auto& r : rep.inv) mean_i += r.rmse;
        mean_n /= static_cast<double>(rep.noninv.size());
        mean_i /= static_cast<double>(rep.inv.size());
        CHECK(rep.rmse_nis == doctest::Approx(mean_n).epsilon(1e-14));
        CHECK(rep.rmse_is == doctest::Approx(mean_i).epsilon(1e-14));
    }
    // The stationary preset is where the invariant scheme is exact.
    CHECK(reports[2].rmse_is < 1e-10);
    CHECK(reports[2].ratio_percent < 1e-4);
}

TEST_CASE("ensemble results are independent of the thread count") {
    auto config = quick_config();
    config.threads = 1;
    const auto serial = imfd::run_table1(config);
    config.threads = 4;
    const auto parallel = imfd::run_table1(config);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t s = 0; s < serial.size(); ++s) {
        CHECK(serial[s].rmse_nis == parallel[s].rmse_nis);
        CHECK(serial[s].rmse_is == parallel[s].rmse_is);
        for (std::size_t k = 0; k < serial[s].noninv.size(); ++k) {
            CHECK(serial[s].noninv[k].rmse == parallel[s].noninv[k].rmse);
            CHECK(serial[s].inv[k].rmse == parallel[s].inv[k].rmse);
        }
    }
}

TEST_CASE("repeated runs are bitwise identical") {
    auto config = quick_config();
    const auto first = imfd::run_table1(config);
    const auto second = imfd::run_table1(config);
    for (std::size_t s = 0; s < first.size(); ++s) {
        for (std::size_t k = 0; k < first[s].noninv.size(); ++k) {
            CHECK(first[s].noninv[k].rmse == second[s].noninv[k].rmse);
            CHECK(first[s].inv[k].rmse == second[s].inv[k].rmse);
        }
    }
}

TEST_CASE("radius sweep flags rows by majority convergence") {
    auto config = quick_config();
    const auto rows = imfd::sweep_r(config, {0.01, 0.2564});
    REQUIRE(rows.size() == 4);  // two schemes x two radii
    for (const auto& row : rows) {
        const bool tiny = row.param == 0.01;
        CHECK(row.converged == !tiny);
        if (tiny) {
            CHECK(std::isnan(row.rmse));
        } else {
            CHECK(std::isfinite(row.rmse));
            CHECK(row.rmse > 0.0);
        }
    }
    // Both schemes appear for every radius.
    int noninv_rows = 0, inv_rows = 0;
    for (const auto& row : rows) {
        if (row.scheme == "noninvariant") ++noninv_rows;
        if (row.scheme == "invariant") ++inv_rows;
    }
    CHECK(noninv_rows == 2);
    CHECK(inv_rows == 2);
}

TEST_CASE("mu sweep pairs explicit or matched invariant values") {
    auto config = quick_config();
    config.n_steps = 20;
    config.seeds = {1};

    const auto rows = imfd::sweep_mu(config, {0.5, 1.0}, {2.0, 4.0});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].scheme == "noninvariant");
    CHECK(rows[0].param == 0.5);
    CHECK(rows[1].param == 1.0);
    CHECK(rows[2].scheme == "invariant");
    CHECK(rows[2].param == 2.0);
    CHECK(rows[3].param == 4.0);
    for (const auto& row : rows) CHECK(row.converged);

    // Automatic pairing keys the invariant rows by the non-invariant mu
    // they were matched from.
    const auto matched = imfd::sweep_mu(config, {1.0}, {});
    REQUIRE(matched.size() == 2);
    CHECK(matched[1].scheme == "invariant");
    CHECK(matched[1].param == 1.0);
    CHECK(matched[1].converged);
}

TEST_CASE("the derivative study recovers the design orders") {
    const auto report =
        imfd::run_convergence({0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625}, 1.0);
    REQUIRE(report.points.size() == 5);
    for (std::size_t i = 1; i < report.points.size(); ++i) {
        CHECK(report.points[i].err_ux < report.points[i - 1].err_ux);
        CHECK(report.points[i].err_uxx < report.points[i - 1].err_uxx);
    }
    CHECK(report.slope_ux == doctest::Approx(3.0).epsilon(0.02));
    CHECK(report.slope_uxx == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("format_double round-trips doubles through text") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, -2.5e300, 0.0, 125.0, -0.2564}) {
        const std::string s = imfd::format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(imfd::format_double(std::nan("")) == "nan");
    CHECK(imfd::format_double(0.5) == "0.5");
    CHECK(imfd::format_double(125.0) == "125");
}

TEST_CASE("table CSV lists noninvariant then invariant per solution") {
    imfd::ExperimentReport rep;
    rep.solution = "u1";
    rep.noninv = {{1, 0.5, true, 1.0, ""}, {2, std::nan(""), false, 1.0, "boom"}};
    rep.inv = {{1, 0.25, true, 2.0, ""}, {2, 0.125, true, 2.0, ""}};

    std::stringstream out;
    imfd::write_table1_csv(out, {rep});
    const std::string expected =
        "solution,scheme,seed,rmse,converged\n"
        "u1,noninvariant,1,0.5,1\n"
        "u1,noninvariant,2,nan,0\n"
        "u1,invariant,1,0.25,1\n"
        "u1,invariant,2,0.125,1\n";
    CHECK(out.str() == expected);
}

TEST_CASE("sweep CSV names the swept parameter") {
    const std::vector<imfd::SweepRow> rows = {
        {"noninvariant", 0.5, 0.25, true},
        {"invariant", 0.5, std::nan(""), false},
    };
    std::stringstream out;
    imfd::write_sweep_csv(out, "mu", rows);
    const std::string expected =
        "scheme,mu,rmse,converged\n"
        "noninvariant,0.5,0.25,1\n"
        "invariant,0.5,nan,0\n";
    CHECK(out.str() == expected);
}

TEST_CASE("convergence CSV carries one row per spacing") {
    imfd::ConvergenceReport report;
    report.points = {{0.5, 0.25, 0.125}, {0.25, 0.03125, 0.03125}};
    report.slope_ux = 3.0;
    report.slope_uxx = 2.0;
    std::stringstream out;
    imfd::write_convergence_csv(out, report);
    const std::string expected =
        "h,err_ux,err_uxx\n"
        "0.5,0.25,0.125\n"
        "0.25,0.03125,0.03125\n";
    CHECK(out.str() == expected);
}

TEST_CASE("summary table prints aligned scheme columns") {
    auto config = quick_config();
    config.n_steps = 10;
    config.seeds = {1};
    const auto reports = imfd::run_table1(config);
    std::stringstream out;
    imfd::write_summary(out, reports);
    const std::string text = out.str();
    CHECK(text.find("solution") != std::string::npos);
    CHECK(text.find("u1") != std::string::npos);
    CHECK(text.find("u3") != std::string::npos);
    CHECK(text.find("%") != std::string::npos);
    CHECK(text.find("2/2") != std::string::npos);  // both schemes' single seed
}
