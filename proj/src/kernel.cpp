#include "foxh/kernel.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "foxh/errors.hpp"
#include "foxh/mittag_leffler.hpp"

namespace foxh {

bool near_integer(double v, double tol) { return std::abs(v - std::nearbyint(v)) < tol; }
bool is_positive_integer(double v, double tol) { return near_integer(v, tol) && std::nearbyint(v) >= 1; }
bool is_nonnegative_integer(double v, double tol) { return near_integer(v, tol) && std::nearbyint(v) >= 0; }

bool KernelParams::integrable() const {
    return gamma <= beta + 1e-12 || (std::abs(alpha - 1) < 1e-12 && std::abs(sigma) < 1e-12);
}

bool KernelParams::unverified() const {
    return d == 1 && std::abs(gamma - beta) < 1e-9 && !is_positive_integer(sigma + alpha);
}

ValidationReport validate(const KernelParams& p) {
    if (p.d < 1) return {false, "d must be a positive integer"};
    if (!(p.alpha > 0 && p.alpha < 2)) return {false, "alpha must lie in (0,2)"};
    if (!(p.beta > 0)) return {false, "beta must be positive"};
    if (!(p.gamma >= 0)) return {false, "gamma must be nonnegative"};
    if (!std::isfinite(p.sigma)) return {false, "sigma must be finite"};
    return {};
}

void require_valid(const KernelParams& p) {
    auto r = validate(p);
    if (!r.ok) throw InvalidArgument(r.message);
}

double norm(const std::vector<double>& x) {
    // scaled to avoid overflow for extreme coordinates
    double s = 0;
    for (double v : x) s = std::max(s, std::abs(v));
    if (s == 0) return 0;
    double acc = 0;
    for (double v : x) acc += (v / s) * (v / s);
    return s * std::sqrt(acc);
}

SimilarityVariable similarity(const KernelParams& p, double t, double x_norm) {
    double lm = 2 * p.beta * std::log(x_norm) - p.alpha * std::log(t);
    return {std::exp(lm), std::exp(lm - 2 * p.beta * std::log(2.0))};
}

namespace {

KernelHSpec base_spec(const KernelParams& p) {
    const double hd = 0.5 * p.d;
    const double b = p.beta, g = p.gamma;
    KernelHSpec k;
    k.spec.m = 2;
    k.spec.n = 1;
    bool beta_int = is_positive_integer(b);
    if (g < 1e-12 && beta_int) {
        // Gauss multiplication: Gamma(1 - beta z) splits into beta factors,
        // the one equal to Gamma(1 - z) cancels and P2 becomes empty.
        int nb = static_cast<int>(std::nearbyint(b));
        k.spec.n = 0;
        k.spec.upper = {{1 - p.sigma, p.alpha}};
        k.spec.lower = {{hd, double(nb)}, {1, 1}};
        for (int j = 1; j < nb; ++j) k.spec.lower.push_back({double(j) / nb, 1});
        k.log_prefactor = 0.5 * (nb - 1) * std::log(2 * kPi) + 0.5 * std::log(double(nb));
        k.arg_scale = std::pow(double(nb), -double(nb));
    } else if (g < 1e-12) {
        k.spec.upper = {{0, 1}, {1 - p.sigma, p.alpha}};
        k.spec.lower = {{hd, b}, {1, 1}, {0, b}};
        k.log_prefactor = std::log(b);
    } else if (std::abs(g - b) < 1e-12) {
        k.spec.upper = {{1, 1}, {1 - p.sigma, p.alpha}};
        k.spec.lower = {{hd + b, b}, {2, 1}, {b, b}};
        k.log_prefactor = std::log(b);
        k.sign = -1;
    } else {
        k.spec.upper = {{1, 1}, {1 - p.sigma, p.alpha}};
        k.spec.lower = {{hd + g, b}, {1, 1}, {1 + g, b}};
    }
    return k;
}

KernelValue finish_flags(KernelValue v, const KernelParams& p) {
    if (p.unverified()) v.flags = "unverified_regime";
    return v;
}

}  // namespace

KernelHSpec kernel_h_spec(const KernelParams& p, int q) {
    require_valid(p);
    if (q < 0) throw InvalidArgument("q must be nonnegative");
    KernelHSpec k = base_spec(p);
    for (int i = 0; i < q; ++i) k.spec = derivative_spec(k.spec);
    return k;
}

KernelValue h_sigma_gamma(const KernelParams& p, int q, double r, double tol, std::optional<double> ell) {
    if (!(r > 0)) throw InvalidArgument("r must be positive");
    KernelHSpec k = kernel_h_spec(p, q);
    double arg = k.arg_scale * r;
    EvalResult e = ell ? eval_bromwich(k.spec, arg, tol, ell) : eval(k.spec, arg, tol);
    KernelValue v;
    double scale = std::exp(k.log_prefactor);
    v.sign = e.sign * k.sign;
    v.log_abs = e.log_abs + k.log_prefactor;
    v.value = k.sign * scale * e.value;
    v.abs_error = scale * e.abs_error_estimate;
    v.method = e.method;
    return finish_flags(v, p);
}

KernelValue p_eval_detailed(const KernelParams& p, const SpaceTimePoint& pt, double tol) {
    require_valid(p);
    if (!(pt.t > 0)) throw InvalidArgument("t must be positive");
    if (static_cast<int>(pt.x.size()) != p.d) throw InvalidArgument("x must have d components");
    double xn = norm(pt.x);
    if (!(xn > 0)) throw PoleError("kernel is singular at x = 0");
    auto sv = similarity(p, pt.t, xn);
    KernelValue h = h_sigma_gamma(p, 0, sv.R, tol);
    double lpre = 2 * p.gamma * std::log(2.0) - 0.5 * p.d * std::log(kPi) - (p.d + 2 * p.gamma) * std::log(xn) -
                  p.sigma * std::log(pt.t);
    KernelValue v = h;
    v.log_abs = h.log_abs + lpre;
    double f = std::exp(lpre);
    v.value = h.sign == 0 ? 0.0 : h.sign * std::exp(v.log_abs);
    v.abs_error = h.abs_error * f;
    return v;
}

double p_eval(const KernelParams& p, const SpaceTimePoint& pt, double tol) {
    return p_eval_detailed(p, pt, tol).value;
}

double p_eval_radial(const KernelParams& p, double t, double x_norm, double tol) {
    SpaceTimePoint pt{t, std::vector<double>(p.d, 0.0)};
    pt.x[0] = x_norm;
    return p_eval(p, pt, tol);
}

std::vector<DerivativeTerm> derivative_terms(const KernelParams& p, const std::vector<int>& a) {
    if (static_cast<int>(a.size()) != p.d) throw InvalidArgument("multi-index must have d entries");
    const double base = -p.d - 2 * p.gamma;
    using Key = std::tuple<std::vector<int>, int, int>;
    std::map<Key, double> terms;
    terms[{std::vector<int>(p.d, 0), 0, 0}] = 1.0;
    for (int i = 0; i < p.d; ++i) {
        if (a[i] < 0) throw InvalidArgument("multi-index entries must be nonnegative");
        for (int rep = 0; rep < a[i]; ++rep) {
            std::map<Key, double> next;
            for (const auto& [key, c] : terms) {
                const auto& [b, j, q] = key;
                double k = base - 2 * j;
                if (b[i] > 0) {
                    auto b2 = b;
                    --b2[i];
                    next[{b2, j, q}] += c * b[i];
                }
                auto b3 = b;
                ++b3[i];
                next[{b3, j + 1, q}] += c * k;
                next[{b3, j + 1, q + 1}] += -2 * p.beta * c;
            }
            terms.clear();
            for (auto& [key, c] : next)
                if (c != 0) terms[key] = c;
        }
    }
    std::vector<DerivativeTerm> out;
    for (const auto& [key, c] : terms) {
        const auto& [b, j, q] = key;
        out.push_back({c, b, j, q});
    }
    return out;
}

KernelValue p_derivative_detailed(const KernelParams& p, const SpaceTimePoint& pt, const std::vector<int>& a,
                                  double tol) {
    require_valid(p);
    bool zero_order = true;
    for (int v : a) zero_order = zero_order && v == 0;
    if (zero_order) return p_eval_detailed(p, pt, tol);
    if (!(pt.t > 0)) throw InvalidArgument("t must be positive");
    if (static_cast<int>(pt.x.size()) != p.d) throw InvalidArgument("x must have d components");
    double xn = norm(pt.x);
    if (!(xn > 0)) throw PoleError("kernel is singular at x = 0");

    auto terms = derivative_terms(p, a);
    int qmax = 0;
    for (const auto& t : terms) qmax = std::max(qmax, t.q);
    auto sv = similarity(p, pt.t, xn);
    std::vector<KernelValue> h;
    for (int q = 0; q <= qmax; ++q) h.push_back(h_sigma_gamma(p, q, sv.R, tol));

    const double base = -p.d - 2 * p.gamma;
    double lpre = 2 * p.gamma * std::log(2.0) - 0.5 * p.d * std::log(kPi) - p.sigma * std::log(pt.t);
    double lxn = std::log(xn);
    double sum = 0, err = 0;
    bool bad = false;
    for (const auto& t : terms) {
        const KernelValue& hq = h[t.q];
        double lmag = lpre + std::log(std::abs(t.coeff)) + (base - 2 * t.norm_steps) * lxn;
        int sg = t.coeff > 0 ? 1 : -1;
        for (int i = 0; i < p.d; ++i) {
            if (t.powers[i] == 0) continue;
            if (pt.x[i] == 0) {
                sg = 0;
                break;
            }
            lmag += t.powers[i] * std::log(std::abs(pt.x[i]));
            if (pt.x[i] < 0 && (t.powers[i] % 2)) sg = -sg;
        }
        if (sg == 0) continue;
        sum += sg * hq.sign * std::exp(lmag + hq.log_abs);
        err += std::exp(lmag) * hq.abs_error;
        bad = bad || !std::isfinite(lmag);
    }
    if (bad) throw ConvergenceError("derivative terms overflowed", INFINITY);
    KernelValue v;
    v.value = sum;
    v.abs_error = err;
    v.sign = sum > 0 ? 1 : (sum < 0 ? -1 : 0);
    v.log_abs = sum == 0 ? -INFINITY : std::log(std::abs(sum));
    v.method = h[0].method;
    return finish_flags(v, p);
}

double p_derivative(const KernelParams& p, const SpaceTimePoint& pt, const std::vector<int>& a, double tol) {
    return p_derivative_detailed(p, pt, a, tol).value;
}

KernelParams time_derivative_params(const KernelParams& p, int m) {
    if (m < 1) throw InvalidArgument("m must be a positive integer");
    KernelParams out = p;
    out.sigma += m;
    return out;
}

KernelParams fractional_derivative_params(const KernelParams& p, double s) {
    if (!(s > 0)) throw InvalidArgument("order must be positive");
    KernelParams out = p;
    out.sigma += s;
    return out;
}

KernelParams fractional_integral_params(const KernelParams& p, double s) {
    if (!(s > 0)) throw InvalidArgument("order must be positive");
    KernelParams out = p;
    out.sigma -= s;
    return out;
}

double fourier_symbol(const KernelParams& p, double xi, double t) {
    require_valid(p);
    if (!(t > 0)) throw InvalidArgument("t must be positive");
    if (!(xi >= 0)) throw InvalidArgument("|xi| must be nonnegative");
    double arg = std::pow(t, p.alpha) * std::pow(xi, 2 * p.beta);
    double e = ml_eval({p.alpha, 1 - p.sigma}, arg);
    return std::pow(xi, 2 * p.gamma) * std::pow(t, -p.sigma) * e;
}

}  // namespace foxh
