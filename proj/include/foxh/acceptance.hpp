#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "foxh/h_function.hpp"

namespace foxh {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    int checks = 0;
    int failures = 0;
    double seconds = 0;
};

inline constexpr int kCriterionCount = 14;

// `tol` is handed to every evaluation inside the criterion; tighter values
// than the library default may make suites fail but never crash.
CriterionResult run_criterion(int id, double tol = kDefaultTol);

// Criteria 1..14 in order; each line is written to `progress` as it finishes.
std::vector<CriterionResult> run_acceptance(std::ostream* progress = nullptr, double tol = kDefaultTol);

// "PASS  #1  Gaussian reproduction: ... (0.4 s)"
std::string format_line(const CriterionResult& r);

struct SuiteResult {
    std::string name;
    int passed = 0;
    int failed = 0;
    double seconds = 0;
};

// quick: gamma identities, Gaussian, Cauchy, scaling. full: every criterion.
std::vector<SuiteResult> selfcheck(bool full, double tol = kDefaultTol, std::ostream* progress = nullptr);

}  // namespace foxh
