#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "foxh/complex_gamma.hpp"
#include "foxh/errors.hpp"

using namespace foxh;

namespace {
double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("log_gamma at simple points") {
    CHECK(std::abs(log_gamma(Complex(1, 0))) < 1e-15);
    CHECK(log_gamma(Complex(0.5, 0)).real() == doctest::Approx(0.5723649429247001).epsilon(1e-14));
    CHECK(std::abs(log_gamma(Complex(0.5, 0)).imag()) < 1e-15);
    CHECK(log_gamma(Complex(10, 0)).real() == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
}

TEST_CASE("log_gamma rejects the poles") {
    CHECK_THROWS_AS(log_gamma(Complex(0, 0)), PoleError);
    CHECK_THROWS_AS(log_gamma(Complex(-3, 0)), PoleError);
    CHECK_THROWS_AS(log_gamma(Complex(-2 + 1e-13, 0)), PoleError);
    CHECK_NOTHROW(log_gamma(Complex(-2.5, 0)));
}

TEST_CASE("reflection at 0.3+0.7i") {
    Complex z(0.3, 0.7);
    Complex lhs = gamma(1.0 - z) * gamma(z);
    Complex rhs = kPi / std::sin(kPi * z);
    CHECK(rel(lhs, rhs) < 1e-12);
}

TEST_CASE("reciprocal gamma is exactly zero at the poles") {
    CHECK(reciprocal_gamma(Complex(0, 0)) == Complex(0, 0));
    CHECK(reciprocal_gamma(Complex(-3, 0)) == Complex(0, 0));
    CHECK(std::abs(reciprocal_gamma(Complex(2, 0)) - 1.0) < 1e-15);
}

TEST_CASE("pole residues alternate") {
    CHECK(gamma_pole_residue(0) == 1.0);
    CHECK(gamma_pole_residue(1) == -1.0);
    CHECK(gamma_pole_residue(3) == doctest::Approx(-1.0 / 6).epsilon(1e-15));
    CHECK(gamma_pole_residue(10) == doctest::Approx(1.0 / 3628800).epsilon(1e-14));
}

TEST_CASE("Stirling magnitude on vertical lines") {
    double a = 0.5;
    double slope = stirling_log_magnitude(a, 1001) - stirling_log_magnitude(a, 1000);
    CHECK(slope == doctest::Approx(-kPi / 2).epsilon(1e-6));
    double ref = log_gamma(Complex(1, 50)).real();
    CHECK(std::abs(stirling_log_magnitude(1, 50) - ref) / std::abs(ref) < 0.01);
    ref = log_gamma(Complex(0, 10)).real();
    CHECK(std::abs(stirling_log_magnitude(0, 10) - ref) / std::abs(ref) < 0.05);
}

TEST_CASE("property: reflection for random z") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> U(-10, 10);
    int checked = 0;
    while (checked < 1000) {
        Complex z(U(rng), U(rng));
        if (std::abs(z) >= 10) continue;
        // keep away from the real-axis poles of both factors
        if (std::abs(z.imag()) < 1e-3 && std::abs(z.real() - std::round(z.real())) < 1e-3) continue;
        Complex rhs = kPi / std::sin(kPi * z);
        Complex lhs = std::exp(log_gamma(1.0 - z) + log_gamma(z));
        CHECK(rel(lhs, rhs) < 1e-10);
        ++checked;
    }
}

TEST_CASE("property: recurrence") {
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> U(-8, 8);
    for (int i = 0; i < 500; ++i) {
        Complex z(U(rng), U(rng));
        if (std::abs(z.imag()) < 1e-2) continue;
        CHECK(rel(gamma(z + 1.0), z * gamma(z)) < 1e-12);
    }
}

TEST_CASE("property: Gauss multiplication for m = 2, 3") {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> U(0.01, 2);
    for (int i = 0; i < 200; ++i) {
        double z = U(rng);
        for (int m : {2, 3}) {
            double lhs = 0;
            for (int k = 0; k < m; ++k) lhs += log_gamma(Complex(z + double(k) / m, 0)).real();
            double rhs = (m - 1) / 2.0 * std::log(2 * kPi) + (0.5 - m * z) * std::log(double(m)) +
                         log_gamma(Complex(m * z, 0)).real();
            CHECK(std::abs(std::exp(lhs - rhs) - 1) < 1e-10);
        }
    }
}

TEST_CASE("property: reciprocal gamma matches 1/exp(log_gamma)") {
    std::mt19937_64 rng(104);
    std::uniform_real_distribution<double> U(-6, 6);
    for (int i = 0; i < 500; ++i) {
        Complex z(U(rng), U(rng));
        if (std::abs(z.imag()) < 1e-2) continue;
        CHECK(rel(reciprocal_gamma(z), 1.0 / std::exp(log_gamma(z))) < 1e-12);
    }
}

TEST_CASE("real helpers") {
    int s = 0;
    CHECK(log_abs_gamma(-0.5, &s) == doctest::Approx(std::log(2 * std::sqrt(kPi))).epsilon(1e-14));
    CHECK(s == -1);
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-13));
    CHECK(log_gamma_positive(4.0) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
    Complex z(0.25, 40);
    Complex ls = log_sin_pi(z);
    CHECK(std::abs(std::exp(ls) - std::sin(kPi * z)) / std::abs(std::sin(kPi * z)) < 1e-12);
}
