#pragma once

#include <string>
#include <vector>

#include "foxh/kernel.hpp"
#include "foxh/regression.hpp"

namespace foxh {

enum class Side { large_M, small_M };
enum class Theorem { T21, T22, T23 };

std::string to_string(Side s);
std::string to_string(Theorem t);

// Large M cases i..vi, small M cases i..v. `branch` separates the sub-cases
// inside one case: 0 below / 1 log (equality) / 2 above for the small-M
// trichotomies, 0/1 for the two-line large-M displays.
struct RegimeCase {
    Theorem theorem = Theorem::T21;
    std::string case_label;
    int branch = 0;
    bool applicable = false;
    bool unverified_flag = false;
    std::string note;
};

RegimeCase classify(const KernelParams& p, int n, Side side);

// Same case with "~" read as an upper bound on the closed side (M >= 1 or M <= 1).
RegimeCase bound_case(const KernelParams& p, int n, Side side);

// |x|^x_power t^t_power (1 + |ln M|)^[log_factor] exp(-exp_rate |x|^exp_x_power t^exp_t_power)
struct Envelope {
    double x_power = 0;
    double t_power = 0;
    bool log_factor = false;
    double exp_rate = 0;
    double exp_x_power = 0;
    double exp_t_power = 0;
    bool two_sided = false;

    double log_value(const KernelParams& p, double t, double x_norm) const;
};

Envelope envelope(const KernelParams& p, int n, Side side);

struct LeadingCoefficients {
    double kappa1 = 0;      // residue at d_{1,0} = -(d/2 + gamma)/beta
    double kappa2 = 0;      // residue at d_{2,0} = -1 (zero where that pole is removable)
    double kappa1_hat = 0;  // order-2 limit at d_{1,0}
    double kappa2_hat = 0;  // order-2 limit at d_{2,0}
    double z1 = 0;
    double z2 = 0;
    int order1 = 0;
    int order2 = 0;
};

// Coefficients of the Mellin kernel of H_{sigma,gamma} itself (prefactors of
// the rewritten forms included).
LeadingCoefficients leading_coefficients(const KernelParams& p);

// D^n_x p along the diagonal x_i = |x|/sqrt(d), first coordinate differentiated n times.
double kernel_derivative_radial(const KernelParams& p, int n, double t, double x_norm, double tol = kDefaultTol);

struct RatioReport {
    std::vector<double> M;
    std::vector<double> ratio;
    double min = 0;
    double max = 0;
    double band = 0;  // max / min
    bool pass = false;
};

// |D^n p| / envelope on grid points (t = 1, |x| from M).
RatioReport ratio_check(const KernelParams& p, int n, Side side, const std::vector<double>& M_grid,
                        double tol_band = 50.0);

struct SlopeReport {
    LinearFit fit;
    double expected = 0;
    double rel_error = 0;  // |fit - expected| / |expected|, absolute when expected is 0
    bool pass = false;
};

// Log-log slope of |D^n p| (divided by the log factor when present) against
// |x| at fixed t, or against t at fixed |x|, for M in [M_lo, M_hi].
SlopeReport x_slope(const KernelParams& p, int n, Side side, double t, double M_lo, double M_hi, int points = 25,
                    double tol = 0.02);
SlopeReport t_slope(const KernelParams& p, int n, Side side, double x_norm, double M_lo, double M_hi,
                    int points = 25, double tol = 0.02);

// ln|p| against M^{1/(2 beta - alpha)} at t = 1; the fitted slope is -c'.
LinearFit exp_rate_fit(const KernelParams& p, double M_lo, double M_hi, int points = 40);

// |p| / (|x|^a t^b) against ln(1/M) at t = 1 for the logarithmic branches.
LinearFit log_branch_fit(const KernelParams& p, int n, double M_lo, double M_hi, int points = 50);

}  // namespace foxh
