#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foxh/errors.hpp"
#include "foxh/oracle.hpp"

using namespace foxh;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// J_1 by its power series, long double accumulation.
double j1_series(double r) {
    long double s = 0, term = r / 2.0L;
    for (int k = 0; k < 60; ++k) {
        s += term;
        term *= -(r * r / 4.0L) / ((k + 1.0L) * (k + 2.0L));
    }
    return static_cast<double>(s);
}
}  // namespace

TEST_CASE("Bessel values") {
    CHECK(std::abs(bessel_j(0.5, kPi)) < 1e-15);
    CHECK(bessel_j(0, 0) == 1.0);
    CHECK(bessel_j(1, 0) == 0.0);
    CHECK(rel(bessel_j(1, 1), j1_series(1)) < 1e-14);
    CHECK(bessel_j(1, 1) == doctest::Approx(0.4400505857).epsilon(1e-10));
    CHECK(rel(bessel_j(-0.5, 2.0), std::sqrt(2 / (kPi * 2.0)) * std::cos(2.0)) < 1e-15);
    CHECK(rel(bessel_j(1, 7.3), j1_series(7.3)) < 1e-12);
    CHECK(std::isfinite(bessel_j(0.5, 1e8)));
}

TEST_CASE("property: Bessel amplitude for large r") {
    for (double r = 51; r < 2000; r *= 1.37) {
        double a = bessel_j(0, r), b = bessel_j(1, r);
        CHECK(std::abs((a * a + b * b) / (2 / (kPi * r)) - 1) < 0.02);
    }
}

TEST_CASE("closed-form references") {
    CHECK(closed_form_reference(ClassicalFamily::gaussian, 1, 1, {0.0}) == doctest::Approx(0.2820947918).epsilon(1e-10));
    CHECK(closed_form_reference(ClassicalFamily::poisson, 1, 1, {0.0}) == doctest::Approx(1 / kPi));
    CHECK(closed_form_reference(ClassicalFamily::poisson, 3, 1, {0.0, 0.0, 0.0}) == doctest::Approx(1 / (kPi * kPi)));
    CHECK_THROWS_AS(closed_form_reference(ClassicalFamily::poisson, KernelParams{1, 1, 1, 0, 0}, 1, {1.0}), InvalidArgument);
    CHECK_NOTHROW(closed_form_reference(ClassicalFamily::gaussian, KernelParams{1, 1, 1, 0, 0}, 1, {1.0}));
}

TEST_CASE("inversion reproduces the classical kernels") {
    double g2 = p_via_inversion({2, 1, 1, 0, 0}, {1, {1.0, 0.0}});
    CHECK(rel(g2, std::exp(-0.25) / (4 * kPi)) < 1e-8);
    CHECK(rel(p_via_inversion({1, 1, 0.5, 0, 0}, {1, {1.0}}), 1 / (2 * kPi)) < 1e-8);
    for (int d = 1; d <= 4; ++d) {
        std::vector<double> x(d, 0.0);
        x[0] = 1.7;
        CHECK(rel(p_via_inversion({d, 1, 1, 0, 0}, {0.8, x}), closed_form_reference(ClassicalFamily::gaussian, d, 0.8, x)) < 1e-8);
        CHECK(rel(p_via_inversion({d, 1, 0.5, 0, 0}, {0.8, x}), closed_form_reference(ClassicalFamily::poisson, d, 0.8, x)) < 1e-8);
    }
}

TEST_CASE("inversion agrees with the Mellin-Barnes kernel") {
    for (KernelParams p : {KernelParams{1, 0.5, 1, 0, 0}, KernelParams{2, 0.5, 1, 0, 0}, KernelParams{3, 1.5, 0.8, 0.3, 0.4},
                           KernelParams{1, 0.7, 0.6, 0.6, 0}})
        for (double M : {0.1, 1.0, 10.0}) {
            std::vector<double> x(p.d, 0.0);
            x[0] = std::pow(M, 1 / (2 * p.beta));
            CHECK(rel(p_via_inversion(p, {1, x}), p_eval(p, {1, x})) < 1e-4);
        }
}

TEST_CASE("property: quadrature refinement") {
    KernelParams p{2, 0.7, 0.9, 0.2, 0};
    QuadratureConfig a, b;
    a.panel_points = 15;
    b.panel_points = 30;
    for (double r : {0.3, 1.0, 3.0}) {
        InversionResult u = p_via_inversion_detailed(p, {1, {r, 0.0}}, a);
        InversionResult v = p_via_inversion_detailed(p, {1, {r, 0.0}}, b);
        CHECK(std::abs(u.value - v.value) < a.tol * std::max(1.0, std::abs(v.value)));
        CHECK(u.panels > 0);
    }
}

TEST_CASE("oracle input checks") {
    QuadratureConfig bad;
    bad.panel_points = 12;
    CHECK_THROWS_AS(require_valid(bad), InvalidArgument);
    bad = QuadratureConfig{};
    bad.tol = -1;
    CHECK_THROWS_AS(require_valid(bad), InvalidArgument);
    CHECK_THROWS_AS(p_via_inversion({1, 0.5, 0.5, 0.9, 0}, {1, {1.0}}), InvalidArgument);
    CHECK_THROWS_AS(p_via_inversion({5, 0.5, 1, 0, 0}, {1, {1.0, 0, 0, 0, 0}}), Unsupported);
}

TEST_CASE("finite differences") {
    ScalarField sq = [](const std::vector<double>& x) { return x[0] * x[0]; };
    ScalarField cube = [](const std::vector<double>& x) { return x[0] * x[0] * x[0]; };
    CHECK(std::abs(finite_difference(sq, {1.0}, {1.0}, 1, 1e-3) - 2) < 1e-10);
    CHECK(std::abs(finite_difference(cube, {1.0}, {1.0}, 2, 1e-3) - 6) < 1e-8);
    CHECK(std::abs(finite_difference(cube, {1.0}, {1.0}, 3, 1e-2) - 6) < 1e-6);
    ScalarField xy = [](const std::vector<double>& x) { return x[0] * x[0] * x[1]; };
    CHECK(std::abs(finite_difference_multi(xy, {1.0, 2.0}, {1, 1}, 1e-2) - 2) < 1e-9);
    // direction is normalised
    CHECK(std::abs(finite_difference(xy, {1.0, 2.0}, {3.0, 0.0}, 1, 1e-4) - 4) < 1e-7);

    KernelParams g{1, 1, 1, 0, 0};
    ScalarField p = [&](const std::vector<double>& x) { return p_eval(g, {1, x}, 1e-13); };
    double want = -0.5 / std::sqrt(4 * kPi) * std::exp(-0.25);
    CHECK(std::abs(finite_difference(p, {1.0}, {1.0}, 1, 1e-3) - want) < 1e-6);
}
