#pragma once

#include "foxh/h_function.hpp"

namespace foxh {

struct MLParams {
    double alpha;    // (0, 2)
    double beta_ml;  // any real
};

enum class MLBranch { automatic, series, asymptotic, h_function };

struct MLResult {
    double value;
    double error_estimate;  // relative
    MLBranch branch;
};

// E_{alpha,beta}(-r) for r >= 0.
double ml_eval(const MLParams& p, double r);

// Branch forced when `branch` is not automatic; error_estimate tells how far
// the forced branch can be trusted.
MLResult ml_eval_detailed(const MLParams& p, double r, MLBranch branch = MLBranch::automatic);

// E_{alpha,beta}(-x) = H^{11}_{12}[x | (0,1) ; (0,1),(1-beta,alpha)].
HFunctionSpec ml_h_spec(const MLParams& p);

}  // namespace foxh
