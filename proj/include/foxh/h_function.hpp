#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foxh/complex_gamma.hpp"

namespace foxh {

// (c_j, gamma_j) for the upper row, (d_j, delta_j) for the lower row.
struct ParamPair {
    double shift;
    double scale;
};

// H^{mn}_{nu mu}: nu = upper.size(), mu = lower.size().
struct HFunctionSpec {
    int m = 0;
    int n = 0;
    std::vector<ParamPair> upper;
    std::vector<ParamPair> lower;

    int nu() const { return static_cast<int>(upper.size()); }
    int mu() const { return static_cast<int>(lower.size()); }
};

struct ValidationReport {
    bool ok = true;
    std::string message;
};

ValidationReport validate(const HFunctionSpec& spec);
void require_valid(const HFunctionSpec& spec);  // throws InvalidArgument

struct DerivedConstants {
    double alpha_star;
    double Lambda;
    double omega;
    double eta;
};

DerivedConstants derived_constants(const HFunctionSpec& spec);

// One factor Gamma(a + b z)^power of the Mellin kernel, power = +1 or -1.
struct GammaFactor {
    double a;
    double b;
    int power;
};

// Kernel factors with identical numerator/denominator pairs removed.
std::vector<GammaFactor> gamma_factors(const HFunctionSpec& spec);

// log of the Mellin kernel at z (branch irrelevant, real part is ln|.|).
Complex log_mellin_kernel(const HFunctionSpec& spec, Complex z);

struct Pole {
    double location;
    int order;                 // 1 or 2 after cancellations
    std::vector<int> sources;  // lower j -> j, upper j -> mu + j
};

// left: d^_0 > d^_1 > ...; right: c^_0 < c^_1 < ...
struct PoleLattice {
    std::vector<Pole> left;
    std::vector<Pole> right;
};

// Only the fully enumerated prefix of each side is returned.
PoleLattice pole_lattice(const HFunctionSpec& spec, int depth);

// (coeff_const + coeff_log ln r) * r^power_of_r * exp(log_scale)
struct LogPolynomialTerm {
    double power_of_r = 0;
    double coeff_const = 0;
    double coeff_log = 0;
    double log_scale = 0;

    double operator()(double r) const;
    double log_abs(double r) const;
};

// Res_{z=pole} [kernel(z) r^{-z}].
LogPolynomialTerm residue_term(const HFunctionSpec& spec, const Pole& pole);

// Laurent data of the kernel at z0: a_{-1} (residue) and a_{-2}.
struct LaurentData {
    int order = 0;
    double residue = 0;
    double second = 0;
};

LaurentData laurent_at(const HFunctionSpec& spec, double z0);

enum class EvalMethod { residue_series, bromwich, tail_expansion };

std::string to_string(EvalMethod m);

struct EvalResult {
    double value = 0;
    double abs_error_estimate = 0;
    EvalMethod method = EvalMethod::bromwich;
    double log_abs = 0;  // ln|value|, usable when value underflows
    int sign = 0;
    double ell = 0;      // Bromwich abscissa actually used
    int crossed_poles = 0;
    int terms = 0;
};

struct ContourSpec {
    enum class Kind { bromwich, left_hankel, right_hankel };
    Kind kind = Kind::bromwich;
    double ell = 0;
    double height = 0;
    double step = 1;
};

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kMaxTerms = 200;

EvalResult eval_residue_series(const HFunctionSpec& spec, double r, double tol = kDefaultTol,
                               int max_terms = kMaxTerms);

// Vertical-line quadrature. With ell given the line must lie in (d^_0, c^_0).
// Without it the abscissa is placed by minimising the integrand size and any
// poles crossed on the way are added back as residues.
EvalResult eval_bromwich(const HFunctionSpec& spec, double r, double tol = kDefaultTol,
                         std::optional<double> ell = std::nullopt);

EvalResult eval(const HFunctionSpec& spec, double r, double tol = kDefaultTol);

// Strip (d^_0, c^_0) in which a plain Bromwich line may sit.
struct Window {
    double lo;
    double hi;
};
Window bromwich_window(const HFunctionSpec& spec);

struct TailExpansion {
    double value;
    double remainder_lo;  // remainder is O(r^{-M}) (resp. O(r^M)) with lo < M < hi
    double remainder_hi;
};

// First p+1 residues from the side opposite to the convergent series.
TailExpansion tail_expansion(const HFunctionSpec& spec, double r, int p);

// Log of the stretched-exponential envelope when P2 is empty.
double exp_decay_envelope(const HFunctionSpec& spec, double r);

// Augmented rows used by the r-derivative rule.
HFunctionSpec derivative_spec(const HFunctionSpec& spec);

}  // namespace foxh
