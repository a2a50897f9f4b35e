#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "foxh/kernel.hpp"

namespace foxh {

enum class OutputFormat { csv, json };

struct RunConfig {
    KernelParams params;
    int n = 0;                      // derivative order along the first coordinate
    std::vector<double> t_grid{1.0};
    std::vector<double> x_grid{1.0};  // |x| values; ignored when M_grid is set
    std::vector<double> M_grid;
    double tol = kDefaultTol;
    OutputFormat format = OutputFormat::csv;
};

// "v", "v1,v2,..." or "a:b:k" (k log-spaced points from a to b).
std::vector<double> parse_grid(const std::string& spec);

// Flat key=value text; '#' starts a comment. Unknown keys are an error.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Applies key=value pairs on top of `base`.
RunConfig apply_config(RunConfig base, const std::map<std::string, std::string>& kv);

// Throws InvalidArgument on empty grids, nonpositive points or tol outside [1e-14, 1e-2].
void require_valid(const RunConfig& cfg);

// Exit codes: 0 ok, 1 selfcheck failure, 2 invalid input, 3 numerical failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace foxh
