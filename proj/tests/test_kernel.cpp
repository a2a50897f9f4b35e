#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "foxh/errors.hpp"
#include "foxh/kernel.hpp"
#include "foxh/mittag_leffler.hpp"
#include "foxh/oracle.hpp"

using namespace foxh;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> at_norm(int d, double r) {
    std::vector<double> x(d, 0.0);
    x[0] = r;
    return x;
}

KernelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0, 1);
    KernelParams p{1 + int(rng() % 3), 0.2 + 1.6 * U(rng), 0.3 + 1.7 * U(rng), 0, -0.5 + 2 * U(rng)};
    p.gamma = (rng() % 3 == 0) ? 0.0 : p.beta * U(rng);
    return p;
}

}  // namespace

TEST_CASE("parameter flags") {
    CHECK(KernelParams{1, 0.5, 0.8, 0.3, 0}.integrable());
    CHECK_FALSE(KernelParams{1, 0.5, 0.8, 1.0, 0}.integrable());
    CHECK(KernelParams{1, 1.0, 0.8, 1.0, 0}.integrable());
    CHECK(KernelParams{1, 0.5, 0.6, 0.6, 0.9}.unverified());
    CHECK_FALSE(KernelParams{1, 0.5, 0.6, 0.6, 0.5}.unverified());
    CHECK_FALSE(KernelParams{2, 0.5, 0.6, 0.6, 0.9}.unverified());
    CHECK_THROWS_AS(require_valid(KernelParams{1, 2.0, 1, 0, 0}), InvalidArgument);
    CHECK_THROWS_AS(require_valid(KernelParams{1, 1.0, -1, 0, 0}), InvalidArgument);
    CHECK_THROWS_AS(require_valid(KernelParams{0, 1.0, 1, 0, 0}), InvalidArgument);
    CHECK_THROWS_AS(require_valid(KernelParams{1, 1.0, 1, -0.1, 0}), InvalidArgument);
}

TEST_CASE("similarity variable") {
    KernelParams p{2, 0.6, 0.7, 0.2, 0};
    SimilarityVariable s = similarity(p, 2.0, 3.0);
    CHECK(rel(s.M, std::pow(3.0, 1.4) * std::pow(2.0, -0.6)) < 1e-15);
    CHECK(rel(s.R, s.M / std::pow(2.0, 1.4)) < 1e-15);
}

TEST_CASE("Gaussian and Poisson values") {
    CHECK(p_eval({1, 1, 1, 0, 0}, {1, {1.0}}) == doctest::Approx(0.2196956447).epsilon(1e-10));
    CHECK(p_eval({1, 1, 0.5, 0, 0}, {1, {1.0}}) == doctest::Approx(1 / (2 * kPi)).epsilon(1e-10));
    for (int d = 1; d <= 4; ++d)
        for (double t : {0.3, 1.0, 5.0})
            for (double r : {0.1, 1.0, 4.0}) {
                auto x = at_norm(d, r);
                CHECK(rel(p_eval({d, 1, 1, 0, 0}, {t, x}), closed_form_reference(ClassicalFamily::gaussian, d, t, x)) < 1e-10);
                CHECK(rel(p_eval({d, 1, 0.5, 0, 0}, {t, x}), closed_form_reference(ClassicalFamily::poisson, d, t, x)) < 1e-10);
            }
}

TEST_CASE("kernel is singular at the origin") {
    CHECK_THROWS_AS(p_eval({2, 0.5, 1, 0, 0}, {1, {0.0, 0.0}}), PoleError);
    CHECK_THROWS_AS(p_eval({1, 0.5, 1, 0, 0}, {0, {1.0}}), InvalidArgument);
    CHECK_THROWS_AS(p_eval({2, 0.5, 1, 0, 0}, {1, {1.0}}), InvalidArgument);
}

TEST_CASE("kernel spec structure") {
    CHECK(pole_lattice(kernel_h_spec({1, 0.7, 0.8, 0, 0.4}).spec, 3).right.front().location == doctest::Approx(1));
    for (const auto& pl : pole_lattice(kernel_h_spec({1, 0.6, 0.6, 0.6, 0.9}).spec, 4).left)
        CHECK(std::abs(pl.location + 1) > 1e-9);
    CHECK(pole_lattice(kernel_h_spec({1, 0.6, 2, 0, 0.3}).spec, 4).right.empty());
}

TEST_CASE("H is bounded on a wide log grid") {
    for (KernelParams p : {KernelParams{1, 0.5, 0.8, 0.3, 0}, KernelParams{2, 1.4, 1.2, 0, 0.3}, KernelParams{3, 0.8, 0.6, 0.6, 0}}) {
        double sup = 0;
        for (double lr = std::log(1e-6); lr <= std::log(1e6); lr += 0.5) {
            double v = h_sigma_gamma(p, 0, std::exp(lr)).value;
            REQUIRE(std::isfinite(v));
            sup = std::max(sup, std::abs(v));
        }
        CHECK(sup < 1e6);
    }
}

TEST_CASE("derivative of H raises q") {
    KernelParams p{2, 0.7, 0.9, 0.3, 0.2};
    for (int q = 0; q < 3; ++q)
        for (double r : {0.05, 0.5, 5.0, 50.0}) {
            double h = r * 1e-4;
            double fd = (h_sigma_gamma(p, q, r + h, 1e-13).value - h_sigma_gamma(p, q, r - h, 1e-13).value) / (2 * h);
            double want = -h_sigma_gamma(p, q + 1, r, 1e-13).value / r;
            CHECK(std::abs(fd - want) <= 1e-5 * std::abs(want) + 1e-12);
        }
}

TEST_CASE("spatial derivatives") {
    KernelParams g{1, 1, 1, 0, 0};
    double want = -0.5 / std::sqrt(4 * kPi) * std::exp(-0.25);
    CHECK(rel(p_derivative(g, {1, {1.0}}, {1}), want) < 1e-10);
    CHECK(p_derivative(g, {1, {1.0}}, {1}) == doctest::Approx(-0.1098478).epsilon(1e-6));

    KernelParams p{2, 0.7, 0.9, 0.3, 0.2};
    SpaceTimePoint pt{1.3, {0.8, 0.5}};
    CHECK(p_derivative(p, pt, {0, 0}) == p_eval(p, pt));

    ScalarField f = [&](const std::vector<double>& x) { return p_eval(p, {pt.t, x}, 1e-13); };
    for (std::vector<int> a : {std::vector<int>{1, 0}, {0, 1}, {1, 1}, {2, 0}, {2, 1}, {0, 3}}) {
        double fd = finite_difference_multi(f, pt.x, a, 1e-2);
        CHECK(rel(p_derivative(p, pt, a, 1e-13), fd) < 1e-4);
    }
    double h = 1e-4 * norm(pt.x);
    double fd1 = (f({pt.x[0] + h, pt.x[1]}) - f({pt.x[0] - h, pt.x[1]})) / (2 * h);
    CHECK(rel(p_derivative(p, pt, {1, 0}, 1e-13), fd1) < 1e-4);
}

TEST_CASE("derivative expansion shape") {
    KernelParams p{2, 0.7, 0.9, 0.3, 0.2};
    auto terms = derivative_terms(p, {1, 0});
    REQUIRE(!terms.empty());
    int max_q = 0;
    for (const auto& t : terms) max_q = std::max(max_q, t.q);
    CHECK(max_q == 1);
    terms = derivative_terms(p, {2, 1});
    max_q = 0;
    for (const auto& t : terms) max_q = std::max(max_q, t.q);
    CHECK(max_q == 3);
}

TEST_CASE("time derivative parameters") {
    CHECK(time_derivative_params({1, 0.5, 1, 0, 0}, 1).sigma == 1);
    CHECK(time_derivative_params({1, 0.5, 1, 0, -0.5}, 2).sigma == 1.5);
    KernelParams p{1, 0.5, 1, 0, 0.2};
    CHECK(fractional_derivative_params(fractional_integral_params(p, 0.3), 0.3).sigma == doctest::Approx(0.2));

    for (KernelParams q : {KernelParams{1, 0.5, 1, 0, 0}, KernelParams{2, 1.3, 0.7, 0.3, 0.4}}) {
        std::vector<double> x = {0.9, 0.4};
        x.resize(q.d);
        double t = 1.1, h = 1e-4 * t;
        double fd = (p_eval(q, {t + h, x}, 1e-13) - p_eval(q, {t - h, x}, 1e-13)) / (2 * h);
        CHECK(rel(fd, p_eval(time_derivative_params(q, 1), {t, x})) < 1e-4);
    }
}

TEST_CASE("Fourier symbol") {
    CHECK(fourier_symbol({2, 0.6, 0.8, 0, 0}, 0.0, 1.7) == 1.0);
    for (double xi : {0.3, 1.0, 2.0}) CHECK(rel(fourier_symbol({1, 1, 1, 0, 0}, xi, 0.7), std::exp(-0.7 * xi * xi)) < 1e-13);
    KernelParams p{1, 0.6, 0.8, 0.8, 0};
    double peak = 0;
    for (double lx = -5; lx <= 5; lx += 0.1) peak = std::max(peak, fourier_symbol(p, std::exp(lx), 1.0));
    CHECK(std::isfinite(peak));
    CHECK(peak < 10);
    CHECK(fourier_symbol(p, std::exp(5.0), 1.0) < peak);
}

TEST_CASE("property: scaling identity") {
    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 60; ++k) {
        KernelParams p = random_params(rng);
        double t = std::exp(-2 + 4 * U(rng));
        std::vector<double> x(p.d);
        for (auto& xi : x) xi = -2 + 4 * U(rng);
        double lhs = p_eval(p, {t, x});
        std::vector<double> y = x;
        for (auto& yi : y) yi *= std::pow(t, -p.alpha / (2 * p.beta));
        double rhs = std::pow(t, -p.sigma - p.alpha * (p.d + 2 * p.gamma) / (2 * p.beta)) * p_eval(p, {1.0, y});
        CHECK(rel(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("property: radial symmetry") {
    KernelParams p{3, 0.7, 0.9, 0.3, 0.2};
    std::vector<double> a = {1.2, 0, 0}, b = {0, 0, 1.2}, c = {0, -1.2, 0};
    CHECK(p_eval(p, {1, a}) == p_eval(p, {1, b}));
    CHECK(p_eval(p, {1, a}) == p_eval(p, {1, c}));
}

TEST_CASE("property: positivity of subordinated densities") {
    for (double a : {0.3, 0.7, 1.0})
        for (double b : {0.4, 0.8, 1.0})
            for (int d = 1; d <= 3; ++d)
                for (double lr = -3; lr <= 3; lr += 0.5) CHECK(p_eval_radial({d, a, b, 0, 0}, 1.0, std::exp(lr)) > 0);
}

TEST_CASE("unverified regime is flagged, not refused") {
    KernelValue v = p_eval_detailed({1, 0.5, 0.6, 0.6, 0.9}, {1, {1.0}});
    CHECK(v.flags == "unverified_regime");
    CHECK(std::isfinite(v.value));
    CHECK(p_eval_detailed({1, 0.5, 0.6, 0.3, 0.9}, {1, {1.0}}).flags.empty());
}

TEST_CASE("Fourier consistency for gamma = sigma = 0") {
    for (int d = 1; d <= 3; ++d)
        for (KernelParams p : {KernelParams{d, 0.5, 1, 0, 0}, KernelParams{d, 1.3, 0.7, 0, 0}})
            for (double M : {0.1, 1.0, 10.0}) {
                double r = std::pow(M, 1 / (2 * p.beta));
                auto x = at_norm(d, r);
                CHECK(rel(p_via_inversion(p, {1, x}), p_eval(p, {1, x})) < 1e-4);
            }
}
