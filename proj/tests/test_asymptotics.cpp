#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "foxh/asymptotics.hpp"
#include "foxh/regression.hpp"

using namespace foxh;

TEST_CASE("regression helpers") {
    std::vector<double> x = {0, 1, 2, 3, 4}, y;
    for (double v : x) y.push_back(2 - 0.5 * v);
    LinearFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-0.5));
    CHECK(f.intercept == doctest::Approx(2));
    CHECK(f.r2 == doctest::Approx(1));
    auto g = log_space(1, 100, 3);
    REQUIRE(g.size() == 3);
    CHECK(g[1] == doctest::Approx(10));
    CHECK(g[2] == 100);
    std::vector<double> noise = {0.1, -0.2, 0.15, -0.05, 0.0, 0.1, -0.1};
    std::vector<double> xs = {0, 1, 2, 3, 4, 5, 6};
    CHECK_FALSE(slope_significant(fit_line(xs, noise)));
}

TEST_CASE("classification examples") {
    RegimeCase c = classify({1, 0.6, 1, 0, 0.3}, 0, Side::large_M);
    CHECK(c.theorem == Theorem::T21);
    CHECK(c.case_label == "i");
    CHECK(c.applicable);
    CHECK(envelope({1, 0.6, 1, 0, 0.3}, 0, Side::large_M).exp_rate > 0);

    c = classify({1, 1, 0.7, 0.2, 0}, 0, Side::large_M);
    CHECK(c.case_label == "ii");

    c = classify({1, 0.5, 0.6, 0.6, 0.9}, 0, Side::large_M);
    CHECK(c.unverified_flag);
    c = classify({1, 0.5, 0.6, 0.6, 0.5}, 0, Side::large_M);
    CHECK_FALSE(c.unverified_flag);

    c = classify({1, 0.5, 1.2, 0, 0.3}, 0, Side::small_M);
    CHECK(c.theorem == Theorem::T22);
    CHECK(c.case_label == "i");
    CHECK(c.branch == 0);
    CHECK(classify({2, 0.6, 1, 0, 0.1}, 0, Side::small_M).branch == 1);
    CHECK(classify({3, 0.6, 1, 0.2, 0.1}, 0, Side::small_M).branch == 2);

    CHECK(classify({1, 0.8, 0.6, 0, 0.2}, 0, Side::large_M).case_label == "iv");
    CHECK(classify({1, 1.4, 0.8, 0.3, -0.5}, 0, Side::large_M).case_label == "iii");
}

TEST_CASE("derivatives are upper bounds") {
    RegimeCase c = bound_case({1, 1.4, 0.8, 0.3, -0.5}, 2, Side::large_M);
    CHECK(c.theorem == Theorem::T23);
    CHECK(c.case_label == "iii");
    CHECK_FALSE(envelope({1, 1.4, 0.8, 0.3, -0.5}, 2, Side::large_M).two_sided);
}

TEST_CASE("envelope exponents") {
    KernelParams p{2, 1.2, 0.7, 0.3, 0.5};
    Envelope e = envelope(p, 0, Side::large_M);
    CHECK(e.x_power == doctest::Approx(-p.d - 2 * p.gamma));
    CHECK(e.t_power == doctest::Approx(-p.sigma));
    CHECK(e.two_sided);

    p = {1, 0.5, 1.2, 0, 0.3};
    e = envelope(p, 0, Side::small_M);
    CHECK(e.x_power == 0);
    CHECK(e.t_power == doctest::Approx(-p.sigma - p.alpha * (p.d + 2 * p.gamma) / (2 * p.beta)));

    p = {2, 0.5, 0.7, 0.7, 0.4};
    e = envelope(p, 0, Side::large_M);
    CHECK(e.x_power == doctest::Approx(-p.d - 2 * p.beta));
    CHECK(e.t_power == doctest::Approx(-p.sigma));

    p = {1, 0.8, 0.6, 0, 0.2};
    e = envelope(p, 0, Side::large_M);
    CHECK(e.x_power == doctest::Approx(-p.d - 2 * p.gamma - 2 * p.beta));
    CHECK(e.t_power == doctest::Approx(-p.sigma + p.alpha));

    p = {2, 0.6, 1, 0, 0.1};
    CHECK(envelope(p, 0, Side::small_M).log_factor);
}

TEST_CASE("leading coefficients") {
    // gamma = beta - d/2 makes z = -1 double; sigma + alpha in N removes the double part
    LeadingCoefficients c = leading_coefficients({1, 0.5, 0.9, 0.4, 0.5});
    CHECK(c.kappa2_hat == 0);
    CHECK(leading_coefficients({1, 0.6, 0.9, 0.4, 0.5}).kappa2_hat != 0);
    CHECK(leading_coefficients({1, 0.5, 0.9, 0.2, 0.5}).kappa2 == 0);
    CHECK(leading_coefficients({2, 0.5, 0.7, 0.7, 0.4}).kappa2 == 0);
    CHECK(leading_coefficients({2, 0.6, 0.7, 0.2, 0.3}).kappa2 != 0);
    c = leading_coefficients({2, 0.7, 0.8, 0.3, 0.4});
    CHECK(c.z1 == doctest::Approx(-(1 + 0.3) / 0.8));
    CHECK(c.order1 == 1);
    CHECK(c.kappa1 != 0);
}

TEST_CASE("leading term at small r") {
    // kappa_1 leads when -(d/2 + gamma)/beta lies well right of -1
    for (KernelParams p : {KernelParams{1, 0.5, 1, 0, 0.3}, KernelParams{1, 0.6, 2, 0.2, 0.1}}) {
        LeadingCoefficients c = leading_coefficients(p);
        for (double r : {1e-5, 1e-7}) {
            double h = h_sigma_gamma(p, 0, r, 1e-13).value;
            CHECK(std::abs(h / (c.kappa1 * std::pow(r, -c.z1)) - 1) < 0.01);
        }
    }
}

TEST_CASE("ratio band for the Gaussian") {
    RatioReport r = ratio_check({1, 1, 1, 0, 0}, 0, Side::large_M, log_space(1, 1e3, 12));
    CHECK(r.band < 50);
    CHECK(r.pass);
}

TEST_CASE("fitted slopes") {
    SlopeReport s = x_slope({3, 0.6, 1, 0.2, 0.1}, 0, Side::small_M, 1.0, 1e-6, 1e-4);
    CHECK(s.expected == doctest::Approx(-3 - 0.4 + 2));
    CHECK(s.rel_error < 0.02);
    CHECK(s.pass);

    s = t_slope({1, 0.8, 0.6, 0, 0.2}, 0, Side::large_M, 1.0, 1e3, 1e5);
    CHECK(s.expected == doctest::Approx(-0.2 + 0.8));
    CHECK(s.pass);

    s = x_slope({2, 1.2, 0.7, 0.3, 0.5}, 0, Side::large_M, 1.0, 1e3, 1e5);
    CHECK(s.expected == doctest::Approx(-2.6));
    CHECK(s.pass);

    s = x_slope({1, 0.5, 1.2, 0, 0.3}, 0, Side::small_M, 1.0, 1e-6, 1e-4);
    CHECK(std::abs(s.fit.slope) < 0.02);
}

TEST_CASE("logarithmic branch") {
    LinearFit f = log_branch_fit({2, 0.6, 1, 0, 0.1}, 0, 1e-6, 1e-3);
    CHECK(slope_significant(f));
    CHECK(f.slope != 0);
}

TEST_CASE("exponential decay rate") {
    LinearFit f = exp_rate_fit({1, 1, 1, 0, 0}, 10, 1e3);
    CHECK(f.slope < 0);
    CHECK(f.r2 > 0.99);
    // Gaussian: ln p = -M/4 + const with M = x^2 (exponent 1/(2 beta - alpha) = 1)
    CHECK(f.slope == doctest::Approx(-0.25).epsilon(0.02));
}

TEST_CASE("property: classifier totality") {
    std::mt19937_64 rng(501);
    std::uniform_real_distribution<double> U(0, 1);
    const double specials[] = {0.0, 0.5, 1.0, 2.0};
    for (int k = 0; k < 400; ++k) {
        KernelParams p{1 + int(rng() % 3), rng() % 5 == 0 ? 1.0 : 0.1 + 1.8 * U(rng),
                       rng() % 4 == 0 ? specials[1 + rng() % 3] : 0.2 + 2 * U(rng), 0, rng() % 4 == 0 ? 0.0 : -1 + 3 * U(rng)};
        int pick = int(rng() % 4);
        p.gamma = pick == 0 ? 0.0 : pick == 1 ? p.beta : pick == 2 ? std::max(0.0, p.beta - p.d / 2.0) : p.beta * U(rng);
        for (int n = 0; n <= 3; ++n)
            for (Side s : {Side::large_M, Side::small_M}) {
                RegimeCase c;
                CHECK_NOTHROW(c = classify(p, n, s));
                if (c.applicable) {
                    CHECK_FALSE(c.case_label.empty());
                    CHECK_NOTHROW(envelope(p, n, s));
                    if (n > 0) CHECK_FALSE(envelope(p, n, s).two_sided);
                }
            }
    }
}
