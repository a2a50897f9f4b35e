#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foxh/h_function.hpp"

namespace foxh {

struct KernelParams {
    int d = 1;
    double alpha = 1;
    double beta = 1;
    double gamma = 0;
    double sigma = 0;

    // gamma <= beta, or alpha = 1 and sigma = 0
    bool integrable() const;
    // d = 1, gamma = beta and sigma + alpha not a positive integer: the
    // representation is evaluated normally but the regime is not covered by
    // the known proofs.
    bool unverified() const;
};

ValidationReport validate(const KernelParams& p);
void require_valid(const KernelParams& p);

// Membership tests with the 1e-9 tolerance used throughout.
bool near_integer(double v, double tol = 1e-9);
bool is_positive_integer(double v, double tol = 1e-9);
bool is_nonnegative_integer(double v, double tol = 1e-9);

struct SpaceTimePoint {
    double t;
    std::vector<double> x;
};

double norm(const std::vector<double>& x);

struct SimilarityVariable {
    double M;
    double R;
};

SimilarityVariable similarity(const KernelParams& p, double t, double x_norm);

// H^{(q)}_{sigma,gamma}(r) = sign * exp(log_prefactor) * H[spec](arg_scale * r).
struct KernelHSpec {
    HFunctionSpec spec;
    double log_prefactor = 0;
    int sign = 1;
    double arg_scale = 1;
};

KernelHSpec kernel_h_spec(const KernelParams& p, int q = 0);

struct KernelValue {
    double value = 0;
    double abs_error = 0;
    double log_abs = 0;
    int sign = 0;
    EvalMethod method = EvalMethod::bromwich;
    std::string flags;  // "" or "unverified_regime"
};

// Without ell the core chooses the contour; with ell the line Re z = ell is
// used in the coordinates of kernel_h_spec(p, q).spec.
KernelValue h_sigma_gamma(const KernelParams& p, int q, double r, double tol = kDefaultTol,
                          std::optional<double> ell = std::nullopt);

KernelValue p_eval_detailed(const KernelParams& p, const SpaceTimePoint& pt, double tol = kDefaultTol);
double p_eval(const KernelParams& p, const SpaceTimePoint& pt, double tol = kDefaultTol);
// Radial form, x = (x_norm, 0, ..., 0).
double p_eval_radial(const KernelParams& p, double t, double x_norm, double tol = kDefaultTol);

// One term coeff * x^powers * |x|^(base - 2 * norm_steps) * H^{(q)}(R).
struct DerivativeTerm {
    double coeff;
    std::vector<int> powers;
    int norm_steps;
    int q;
};

// Chain-rule expansion of D_x^a of |x|^base H(R) with dR/dx_i = 2 beta x_i R / |x|^2
// and d/dR H^{(q)} = -R^{-1} H^{(q+1)}.
std::vector<DerivativeTerm> derivative_terms(const KernelParams& p, const std::vector<int>& multi_index);

KernelValue p_derivative_detailed(const KernelParams& p, const SpaceTimePoint& pt,
                                  const std::vector<int>& multi_index, double tol = kDefaultTol);
double p_derivative(const KernelParams& p, const SpaceTimePoint& pt, const std::vector<int>& multi_index,
                    double tol = kDefaultTol);

// D_t^m p_{sigma,gamma} = p_{sigma+m,gamma}.
KernelParams time_derivative_params(const KernelParams& p, int m);
// Riemann-Liouville order s > 0 on the time variable.
KernelParams fractional_derivative_params(const KernelParams& p, double s);
KernelParams fractional_integral_params(const KernelParams& p, double s);

// |xi|^{2 gamma} t^{-sigma} E_{alpha,1-sigma}(-t^alpha |xi|^{2 beta})
double fourier_symbol(const KernelParams& p, double xi_norm, double t);

}  // namespace foxh
