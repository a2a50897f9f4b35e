#pragma once

#include <complex>

namespace foxh {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Principal log Gamma. Throws PoleError within 1e-12 of {0,-1,-2,...}.
Complex log_gamma(Complex z);

// 1/Gamma(z), entire. Exactly zero at the nonpositive integers.
Complex reciprocal_gamma(Complex z);

inline Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

// Residue of Gamma at z = -k: (-1)^k / k!.
double gamma_pole_residue(unsigned k);

// Leading behaviour of ln|Gamma(a+ib)| for large |b|.
double stirling_log_magnitude(double a, double b);

// ln|Gamma(x)| and its sign for real x off the poles.
double log_abs_gamma(double x, int* sign = nullptr);

// log sin(pi z), stable for large |Im z|.
Complex log_sin_pi(Complex z);

double digamma(double x);

// ln Gamma(x) for x > 0, real arithmetic only.
double log_gamma_positive(double x);

struct GammaMagnitudeModel {
    double a;
    double b;
    double log_magnitude;
};

GammaMagnitudeModel gamma_magnitude_model(double a, double b);

}  // namespace foxh
