#include "foxh/complex_gamma.hpp"

#include <array>
#include <cmath>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "foxh/errors.hpp"

namespace foxh {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kLogPi = 1.14472988584940017414;
constexpr double kPoleTol = 1e-12;

bool on_pole(Complex z) {
    if (std::abs(z.imag()) >= kPoleTol || z.real() > kPoleTol) return false;
    return std::abs(z.real() - std::nearbyint(z.real())) < kPoleTol;
}

// Re z >= 0.5
Complex lanczos(Complex z) {
    z -= 1.0;
    Complex x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    Complex t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

// Stirling series, |z| >= 10 and Re z >= 0.5; truncation below 1e-17.
Complex stirling(Complex z) {
    static constexpr std::array<double, 8> c = {
        1.0 / 12,         -1.0 / 360,         1.0 / 1260,         -1.0 / 1680,
        1.0 / 1188,       -691.0 / 360360,    1.0 / 156,          -3617.0 / 122400};
    Complex w = 1.0 / z;
    Complex w2 = w * w;
    Complex s = c[7];
    for (int i = 6; i >= 0; --i) s = s * w2 + c[i];
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + s * w;
}

Complex log_gamma_right(Complex z) {
    return std::norm(z) >= 100.0 ? stirling(z) : lanczos(z);
}

// sin(pi z) with the real part reduced first.
Complex sin_pi(Complex z) {
    double n = std::nearbyint(z.real());
    Complex s = std::sin(kPi * Complex(z.real() - n, z.imag()));
    return std::fmod(std::abs(n), 2.0) == 1.0 ? -s : s;
}

}  // namespace

Complex log_sin_pi(Complex z) {
    if (z.imag() < 0) return std::conj(log_sin_pi(std::conj(z)));
    double n = std::nearbyint(z.real());
    double f = z.real() - n;
    double b = z.imag();
    double phase = std::fmod(std::abs(n), 2.0) == 1.0 ? kPi : 0.0;
    if (b < 20.0) return std::log(std::sin(kPi * Complex(f, b))) + Complex(0, phase);
    // e^{-i pi z} dominates; the other exponential is below e^{-125}.
    return Complex(kPi * b - std::log(2.0), kPi / 2 - kPi * f + phase);
}

Complex log_gamma(Complex z) {
    if (on_pole(z))
        throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
    if (z.real() >= 0.5) return log_gamma_right(z);
    return kLogPi - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

Complex reciprocal_gamma(Complex z) {
    if (on_pole(z)) return 0.0;
    if (z.real() >= 0.5) return std::exp(-log_gamma_right(z));
    if (std::abs(z.imag()) < 20.0) return sin_pi(z) * std::exp(log_gamma_right(1.0 - z)) / kPi;
    return std::exp(log_sin_pi(z) + log_gamma_right(1.0 - z) - kLogPi);
}

double gamma_pole_residue(unsigned k) {
    double f = 1.0;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return (k % 2 ? -1.0 : 1.0) / f;
}

double stirling_log_magnitude(double a, double b) {
    double ab = std::abs(b);
    return kHalfLog2Pi + (a - 0.5) * std::log(ab) - kPi * ab / 2;
}

GammaMagnitudeModel gamma_magnitude_model(double a, double b) {
    return {a, b, stirling_log_magnitude(a, b)};
}

double log_abs_gamma(double x, int* sign) {
    Complex lg = log_gamma(Complex(x, 0.0));
    if (sign) {
        if (x > 0)
            *sign = 1;
        else
            *sign = (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
    }
    return lg.real();
}

double digamma(double x) { return boost::math::digamma(x); }

double log_gamma_positive(double x) {
    if (x < 0.5) return kLogPi - std::log(std::abs(std::sin(kPi * x))) - log_gamma_positive(1.0 - x);
    x -= 1.0;
    double s = kLanczos[0];
    for (int i = 1; i < 9; ++i) s += kLanczos[i] / (x + i);
    double t = x + kLanczosG + 0.5;
    return kHalfLog2Pi + (x + 0.5) * std::log(t) - t + std::log(s);
}

}  // namespace foxh
