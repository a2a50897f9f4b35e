#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "foxh/mittag_leffler.hpp"

using namespace foxh;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Power series with long double accumulation, usable for moderate r.
double series(double a, double b, double r) {
    long double s = 0, zk = 1;
    for (int k = 0; k < 400; ++k) {
        long double g = std::tgamma(static_cast<long double>(a * k + b));
        long double term = std::isinf(g) ? 0.0L : zk / g;
        s += term;
        if (k > 10 && std::abs(term) < 1e-22L * std::abs(s)) break;
        zk *= -r;
    }
    return static_cast<double>(s);
}

}  // namespace

TEST_CASE("closed forms") {
    CHECK(rel(ml_eval({1, 1}, 1), std::exp(-1.0)) < 1e-14);
    CHECK(rel(ml_eval({1, 2}, 1), 1 - std::exp(-1.0)) < 1e-14);
    CHECK(rel(ml_eval({0.5, 1}, 1), std::exp(1.0) * std::erfc(1.0)) < 1e-12);
    CHECK(ml_eval({0.5, 1}, 1) == doctest::Approx(0.4275835762).epsilon(1e-10));
    for (double r : {0.5, 3.0, 7.0, 20.0}) {
        CHECK(rel(ml_eval({1, 1}, r), std::exp(-r)) < 1e-10);
        CHECK(rel(ml_eval({0.5, 1}, r), std::exp(r * r) * std::erfc(r)) < 1e-9);
        CHECK(rel(ml_eval({2 - 1e-12, 1}, 0.0), 1.0) < 1e-15);
    }
}

TEST_CASE("value at zero is 1/Gamma(b)") {
    for (double a : {0.3, 1.0, 1.7})
        for (double b : {-0.5, 0.4, 1.0, 2.5}) CHECK(rel(ml_eval({a, b}, 0), 1 / std::tgamma(b)) < 1e-14);
    CHECK(ml_eval({0.7, 0.0}, 0) == 0.0);
    CHECK(ml_eval({0.7, -2.0}, 0) == 0.0);
}

TEST_CASE("agreement with a long double series") {
    for (double a : {0.4, 0.8, 1.2, 1.6})
        for (double b : {-0.4, 0.5, 1.0, 1.9})
            for (double r : {0.1, 0.7, 2.0}) CHECK(rel(ml_eval({a, b}, r), series(a, b, r)) < 1e-11);
}

TEST_CASE("property: complete monotonicity for alpha <= 1") {
    for (double a : {0.2, 0.5, 0.8, 1.0}) {
        double prev = ml_eval({a, 1}, 0);
        for (int i = 1; i <= 100; ++i) {
            double v = ml_eval({a, 1}, i);
            CHECK(v > 0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("property: each branch agrees with the H route where it claims accuracy") {
    int series_used = 0, asym_used = 0;
    for (double a : {0.35, 0.6, 0.9, 1.3, 1.8})
        for (double b : {0.3, 1.0, 1.6})
            for (double r = 0.5; r < 3000; r *= 1.7) {
                MLResult h = ml_eval_detailed({a, b}, r, MLBranch::h_function);
                MLResult s = ml_eval_detailed({a, b}, r, MLBranch::series);
                MLResult as = ml_eval_detailed({a, b}, r, MLBranch::asymptotic);
                if (s.error_estimate <= 1e-10) {
                    ++series_used;
                    CHECK(std::abs(s.value - h.value) <= 1e-8 * std::abs(h.value));
                }
                if (as.error_estimate <= 1e-10) {
                    ++asym_used;
                    CHECK(std::abs(as.value - h.value) <= 1e-8 * std::abs(h.value));
                }
                // a forced branch never claims more than it delivers
                if (!std::isfinite(s.value)) {
                    CHECK(std::isinf(s.error_estimate));
                    continue;
                }
                CHECK(std::abs(s.value - h.value) <= std::max(1e-8, 2 * s.error_estimate) * std::max(std::abs(h.value), std::abs(s.value)));
            }
    CHECK(series_used > 20);
    CHECK(asym_used > 20);
}

TEST_CASE("property: consistent with the H-function representation") {
    std::mt19937_64 rng(301);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 30; ++k) {
        MLParams p{0.2 + 1.7 * U(rng), -0.5 + 2.5 * U(rng)};
        double r = std::exp(std::log(0.1) + U(rng) * std::log(100.0));
        double h = eval(ml_h_spec(p), r, 1e-13).value;
        CHECK(std::abs(ml_eval(p, r) - h) < 1e-8 * std::max(1.0, std::abs(h)));
    }
}

TEST_CASE("large argument decay") {
    // E_{a,1}(-r) ~ r^{-1} / Gamma(1 - a)
    for (double a : {0.3, 0.6, 1.4}) {
        double r = 1e6;
        CHECK(rel(ml_eval({a, 1}, r) * r, 1 / std::tgamma(1 - a)) < 1e-4);
    }
}

TEST_CASE("branch reporting") {
    CHECK(ml_eval_detailed({0.8, 1}, 0.5).branch == MLBranch::series);
    CHECK(ml_eval_detailed({0.8, 1}, 1e4).branch == MLBranch::asymptotic);
    MLResult r = ml_eval_detailed({0.8, 1}, 0.5);
    CHECK(r.error_estimate < 1e-12);
}
