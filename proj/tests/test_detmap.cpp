// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "peelwave/detmap.hpp"

using namespace peelwave;

TEST_CASE("g_value endpoints and anchor") {
    const auto m = detmap::make_reduced_map(1.0, 2.0);
    CHECK(detmap::g_value(m, 0.0) == 0.0);
    CHECK(detmap::g_value(m, std::numeric_limits<double>::infinity()) == 1.0);
    // u = 2: (beta sqrt(x))^u = x/2, so g(2) = P(1, 3/2).
    CHECK(detmap::g_value(m, 2.0) == doctest::Approx(0.42759329552912010).epsilon(1e-10));
    CHECK_THROWS_AS(detmap::g_value(m, -0.5), std::domain_error);
}

TEST_CASE("g_value_scaled reduction identity") {
    const auto m = detmap::make_reduced_map(1.0, 2.0);
    for (double x : {0.0, 0.5, 2.0, 9.0})
        CHECK(detmap::g_value_scaled(1.0, m, x) == detmap::g_value(m, x));
    CHECK(detmap::g_value_scaled(2.0, m, 8.0) ==
          doctest::Approx(4.0 * 0.42759329552912010).epsilon(1e-10));

    // Scaling covariance to 1e-10 on a grid.
    const auto m2 = detmap::make_reduced_map(1.8, 1.3);
    for (double sigma : {0.5, 2.0, 7.0}) {
        for (double x = 0.1; x < 30.0; x *= 2.3) {
            const double scaled = detmap::g_value_scaled(sigma, m2, x);
            const double reduced = sigma * sigma * detmap::g_value(m2, x / (sigma * sigma));
            CHECK(std::fabs(scaled - reduced) <= 1e-10 * std::max(1.0, reduced));
        }
    }
}

TEST_CASE("g_derivative matches finite differences and limits") {
    const auto m = detmap::make_reduced_map(2.0, 2.0);
    const double fd = oracles::central_difference(
        [&](double x) { return detmap::g_value(m, x); }, 1.0, 1e-5);
    CHECK(detmap::g_derivative(m, 1.0) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(detmap::g_derivative(m, 1e-12) <= 1e-5);
    CHECK(detmap::g_derivative(m, 1e9) <= 1e-12);
    CHECK_THROWS_AS(detmap::g_derivative(m, 0.0), std::domain_error);

    for (double u : {0.5, 1.0, 3.0}) {
        const auto mm = detmap::make_reduced_map(1.7, u);
        for (double x : {0.3, 1.1, 4.0}) {
            const double fd2 = oracles::central_difference(
                [&](double y) { return detmap::g_value(mm, y); }, x, 1e-6 * x);
            CHECK(detmap::g_derivative(mm, x) ==
                  doctest::Approx(fd2).epsilon(1e-6));
        }
    }
}

TEST_CASE("g is monotone and has the stated convexity split") {
    for (double u : {0.5, 1.0, 2.0, 4.0}) {
        const auto m = detmap::make_reduced_map(2.5, u);
        const double inflection = detmap::inflection_point(m);

        double prev = -1.0;
        for (double x = 0.0; x <= 30.0; x += 0.05) {
            const double v = detmap::g_value(m, x);
            CHECK(v >= prev);
            prev = v;
        }

        // Second-difference sign test on both sides of the inflection point.
        const auto second_diff = [&](double x, double h) {
            return detmap::g_value(m, x + h) - 2.0 * detmap::g_value(m, x) +
                   detmap::g_value(m, x - h);
        };
        for (double f : {0.2, 0.5, 0.8}) {
            const double x = f * inflection;
            CHECK(second_diff(x, 0.005 * inflection) >= 0.0);  // convex before
        }
        for (double f : {1.5, 3.0, 8.0}) {
            const double x = f * inflection;
            CHECK(second_diff(x, 0.005 * inflection) <= 0.0);  // concave after
        }
    }
}

TEST_CASE("critical_constant reproduces the published table") {
    const double us[] = {0.1, 0.5, 1.0, 2.0, 3.0, 4.0};
    const double fc[] = {4.0215, 2.7830, 2.42537, 2.16169, 2.0472, 1.98181};
    for (int i = 0; i < 6; ++i) {
        const auto c = detmap::critical_constant(us[i]);
        CHECK(std::fabs(c.F_c - fc[i]) <= 1e-3);

        // Both residuals at the reported solution.
        const auto m = detmap::make_reduced_map(c.F_c, us[i]);
        CHECK(std::fabs(detmap::g_value(m, c.x_star_c) - c.x_star_c) <= 1e-9);
        CHECK(std::fabs(detmap::g_derivative(m, c.x_star_c) - 1.0) <= 1e-9);

        // The tangency point lies in the concave region.
        CHECK(c.x_star_c > detmap::inflection_point(m));
    }
    CHECK_THROWS_AS(detmap::critical_constant(0.01), std::domain_error);
    CHECK_THROWS_AS(detmap::critical_constant(25.0), std::domain_error);
}

TEST_CASE("critical_constant converges at the domain endpoints") {
    for (double u : {0.05, 20.0}) {
        const auto c = detmap::critical_constant(u);
        const auto m = detmap::make_reduced_map(c.F_c, u);
        CHECK(std::fabs(detmap::g_value(m, c.x_star_c) - c.x_star_c) <= 1e-9);
        CHECK(std::fabs(detmap::g_derivative(m, c.x_star_c) - 1.0) <= 1e-9);
        CHECK(c.x_star_c > detmap::inflection_point(m));
        CHECK(detmap::fm_bound(u) > c.F_c);
    }
    // F_c decreases in u toward the flat-tailed limit sqrt(3).
    CHECK(detmap::critical_constant(20.0).F_c > std::sqrt(3.0));
    CHECK(detmap::critical_constant(20.0).F_c < detmap::critical_constant(4.0).F_c);
}

TEST_CASE("fm_bound closed form and dominance over F_c") {
    // u = 2: sqrt((3 sqrt(pi)/2) * sqrt(2e)); u = 1: sqrt(3e).
    const double fm2 = std::sqrt(1.5 * std::sqrt(3.14159265358979323846) *
                                 std::sqrt(2.0 * std::exp(1.0)));
    CHECK(detmap::fm_bound(2.0) == doctest::Approx(fm2).epsilon(1e-12));
    CHECK(detmap::fm_bound(1.0) ==
          doctest::Approx(std::sqrt(3.0 * std::exp(1.0))).epsilon(1e-12));
    CHECK_THROWS_AS(detmap::fm_bound(0.0), std::domain_error);

    for (double u = 0.2; u <= 4.0 + 1e-9; u += 0.1)
        CHECK(detmap::fm_bound(u) > detmap::critical_constant(u).F_c);
}

TEST_CASE("supercritical_structure finds the ordered fixed-point pair") {
    const auto crit = detmap::critical_constant(2.0);
    const auto m = detmap::make_reduced_map(1.15 * crit.F_c, 2.0);
    const auto s = detmap::supercritical_structure(m, crit);

    CHECK(s.l1 > 0.0);
    CHECK(s.l1 < crit.x_star_c);
    CHECK(crit.x_star_c < s.x_star);
    CHECK(std::fabs(detmap::g_value(m, s.l1) - s.l1) <= 1e-9);
    CHECK(std::fabs(detmap::g_value(m, s.x_star) - s.x_star) <= 1e-9);
    CHECK(s.contraction > 0.0);
    CHECK(s.contraction < 1.0);
    CHECK(detmap::g_derivative(m, s.x_star) < 1.0);
}

TEST_CASE("supercritical_structure regime guards") {
    const auto crit = detmap::critical_constant(2.0);
    CHECK_THROWS_AS(detmap::supercritical_structure(
                        detmap::make_reduced_map(0.9 * crit.F_c, 2.0), crit),
                    peelwave::regime_error);
    CHECK_THROWS_AS(detmap::supercritical_structure(
                        detmap::make_reduced_map(1.0005 * crit.F_c, 2.0), crit),
                    peelwave::regime_error);
}

TEST_CASE("fixed points approach the tangency point as F decreases to F_c") {
    const auto crit = detmap::critical_constant(2.0);
    const auto near = detmap::supercritical_structure(
        detmap::make_reduced_map(1.001 * crit.F_c, 2.0), crit);
    const auto mid = detmap::supercritical_structure(
        detmap::make_reduced_map(1.01 * crit.F_c, 2.0), crit);
    const auto far = detmap::supercritical_structure(
        detmap::make_reduced_map(1.15 * crit.F_c, 2.0), crit);

    CHECK(std::fabs(near.l1 - crit.x_star_c) < std::fabs(mid.l1 - crit.x_star_c));
    CHECK(std::fabs(mid.l1 - crit.x_star_c) < std::fabs(far.l1 - crit.x_star_c));
    CHECK(std::fabs(near.x_star - crit.x_star_c) < std::fabs(mid.x_star - crit.x_star_c));
    CHECK(std::fabs(mid.x_star - crit.x_star_c) < std::fabs(far.x_star - crit.x_star_c));
}

TEST_CASE("trichotomy: positive roots of g(x) - x by sign scan") {
    const auto crit = detmap::critical_constant(2.0);
    const auto count_roots = [&](double F) {
        const auto m = detmap::make_reduced_map(F, 2.0);
        const double g_inf = F * F;
        int sign_changes = 0;
        double prev = detmap::g_value(m, 1e-12) - 1e-12;
        for (int i = 1; i <= 4000; ++i) {
            const double x = std::exp(std::log(1e-12) +
                                      (std::log(g_inf) - std::log(1e-12)) * i / 4000.0);
            const double d = detmap::g_value(m, x) - x;
            if ((d > 0.0) != (prev > 0.0)) ++sign_changes;
            prev = d;
        }
        return sign_changes;
    };
    CHECK(count_roots(0.9 * crit.F_c) == 0);
    CHECK(count_roots(1.15 * crit.F_c) == 2);
}

TEST_CASE("classify_regime") {
    const auto crit = detmap::critical_constant(2.0);
    CHECK(detmap::classify_regime(0.9 * crit.F_c, 2.0) == detmap::Regime::subcritical);
    CHECK(detmap::classify_regime(crit.F_c, 2.0) == detmap::Regime::critical);
    CHECK(detmap::classify_regime(1.15 * crit.F_c, 2.0) == detmap::Regime::supercritical);
}

TEST_CASE("deterministic orbit obeys the geometric bound") {
    const auto crit = detmap::critical_constant(2.0);
    const auto m = detmap::make_reduced_map(1.15 * crit.F_c, 2.0);
    const auto s = detmap::supercritical_structure(m, crit);
    const double g_inf = m.F * m.F;

    double x = g_inf;  // x_1 = g(inf)
    for (int n = 1; n <= 60; ++n) {
        CHECK(std::fabs(x - s.x_star) <=
              std::pow(s.contraction, n - 1) * (g_inf - s.x_star) + 1e-12);
        x = detmap::g_value(m, x);
        CHECK(x >= s.x_star - 1e-12);  // decreasing approach from above
    }
    CHECK(detmap::orbit_fixed_point(m) == doctest::Approx(s.x_star).epsilon(1e-9));
}

TEST_CASE("iteration_count") {
    // contraction e^-1, eta 0, alpha 1/2, N = 55 ~ e^4: floor(0.5*1*ln 55)+1 = 3.
    CHECK(detmap::iteration_count(55, std::exp(-1.0), 0.5, 0.0) == 3);
    CHECK_THROWS_AS(detmap::iteration_count(1, 0.5, 0.25, 0.5), std::domain_error);
    CHECK_THROWS_AS(detmap::iteration_count(100, 1.5, 0.25, 0.5), std::domain_error);
    CHECK_THROWS_AS(detmap::iteration_count(100, 0.5, 0.7, 0.5), std::domain_error);
    CHECK_THROWS_AS(detmap::iteration_count(100, 0.5, 0.25, -1.0), std::domain_error);

    const auto crit = detmap::critical_constant(2.0);
    const auto m = detmap::make_reduced_map(1.15 * crit.F_c, 2.0);
    const auto s = detmap::supercritical_structure(m, crit);
    const std::size_t n = detmap::iteration_count(10000, s.contraction, 0.25, 0.5);
    CHECK(n >= 1);
    CHECK(n <= 20);  // O(ln N) scale
}
