#pragma once

#include <functional>
#include <string>
#include <vector>

#include "foxh/kernel.hpp"

namespace foxh {

struct QuadratureConfig {
    int max_panels = 40000;
    int panel_points = 20;     // Gauss-Legendre nodes per panel: 10, 15, 20, 25 or 30
    double tail_cutoff = 5;    // symbol argument t^alpha |xi|^{2 beta} where extrapolation of the tail starts
    double tol = 1e-9;
};

void require_valid(const QuadratureConfig& cfg);

// J_order(r) for order >= -1/2. Orders -1/2 and 1/2 use the elementary closed
// forms, other orders boost::math::cyl_bessel_j.
double bessel_j(double order, double r);

struct InversionResult {
    double value = 0;
    double error_estimate = 0;  // absolute
    int panels = 0;
};

// Radial inverse Fourier transform of fourier_symbol:
// (2 pi)^{-d/2} |x|^{-d} int_0^inf phi(u / |x|) u^{d/2} J_{d/2-1}(u) du,
// which is the cosine transform for d = 1. Panels run between the asymptotic
// zeros of the Bessel factor; the tail is summed with Wynn's epsilon algorithm.
InversionResult p_via_inversion_detailed(const KernelParams& p, const SpaceTimePoint& pt,
                                         const QuadratureConfig& cfg = {});
double p_via_inversion(const KernelParams& p, const SpaceTimePoint& pt, const QuadratureConfig& cfg = {});

enum class ClassicalFamily { gaussian, poisson };

// gaussian: (4 pi t)^{-d/2} exp(-|x|^2 / 4t)
// poisson:  Gamma((d+1)/2) pi^{-(d+1)/2} t (t^2 + |x|^2)^{-(d+1)/2}
double closed_form_reference(ClassicalFamily family, int d, double t, const std::vector<double>& x);
// Throws InvalidArgument unless the parameters belong to the family.
double closed_form_reference(ClassicalFamily family, const KernelParams& p, double t, const std::vector<double>& x);

using ScalarField = std::function<double(const std::vector<double>&)>;

// Central difference of order 1..3 along `direction` (normalised internally), O(h^2).
double finite_difference(const ScalarField& f, const std::vector<double>& point, const std::vector<double>& direction,
                         int order, double h);

// Mixed partial D^a f by a tensor product of one-dimensional central stencils,
// one Richardson step on h and h/2 (error O(h^4)).
double finite_difference_multi(const ScalarField& f, const std::vector<double>& point, const std::vector<int>& a,
                               double h);

}  // namespace foxh
