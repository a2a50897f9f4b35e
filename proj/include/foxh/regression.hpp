#pragma once

#include <vector>

namespace foxh {

// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    double slope_se = 0;
    double intercept_se = 0;
    int n = 0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Two-sided test of slope != 0 at the given confidence level (Student t).
bool slope_significant(const LinearFit& fit, double level = 0.95);

// k log-spaced points from a to b inclusive.
std::vector<double> log_space(double a, double b, int k);

}  // namespace foxh
