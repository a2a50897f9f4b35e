#include "foxh/mittag_leffler.hpp"

#include <cmath>
#include <limits>

#include "foxh/errors.hpp"

namespace foxh {

namespace {

constexpr double kAccept = 1e-13;

bool nonpositive_integer(double u) {
    double n = std::nearbyint(u);
    return n <= 0 && std::abs(u - n) < 1e-12;
}

struct Neumaier {
    double s = 0, c = 0, abs = 0;
    void add(double t) {
        double n = s + t;
        if (std::abs(s) >= std::abs(t))
            c += (s - n) + t;
        else
            c += (t - n) + s;
        s = n;
        abs += std::abs(t);
    }
    double value() const { return s + c; }
};

MLResult series(const MLParams& p, double r) {
    if (r == 0) return {reciprocal_gamma(p.beta_ml).real(), 0.0, MLBranch::series};
    double lr = std::log(r);
    double peak = std::pow(r, 1.0 / p.alpha) / p.alpha;
    Neumaier sum;
    // each term is exp(k ln r - lgamma), so its relative error scales with that exponent's size
    double round = 0;
    for (int k = 0; k < 5000; ++k) {
        double u = p.alpha * k + p.beta_ml;
        double t = 0;
        if (!nonpositive_integer(u)) {
            int sg;
            double lg = log_abs_gamma(u, &sg);
            t = ((k % 2) ? -1.0 : 1.0) * sg * std::exp(k * lr - lg);
            round += std::abs(t) * (2 + std::abs(k * lr) + std::abs(lg));
        }
        sum.add(t);
        if (k > peak + 2 && std::abs(t) <= 1e-18 * sum.abs) break;
    }
    double v = sum.value();
    double rel = (v == 0 || !std::isfinite(v) || !std::isfinite(round)) ? std::numeric_limits<double>::infinity()
                                                                        : 2.3e-16 * (round / std::abs(v) + 1.0);
    return {v, rel, MLBranch::series};
}

MLResult asymptotic(const MLParams& p, double r) {
    const double a = p.alpha, b = p.beta_ml;
    double lr = std::log(r);
    Neumaier sum;
    double prev = std::numeric_limits<double>::infinity();
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 1000; ++k) {
        double u = b - a * k;
        if (nonpositive_integer(u)) continue;
        int sg;
        double lg = log_abs_gamma(u, &sg);
        double mag = std::exp(-k * lr - lg);
        if (mag > prev) {
            smallest = prev;
            break;
        }
        double t = ((k % 2) ? 1.0 : -1.0) * sg * mag;
        sum.add(t);
        prev = mag;
        smallest = mag;
        if (mag < 1e-20 * std::abs(sum.value())) break;
    }
    double extra_err = 0;
    if (std::abs(a - 1.0) < 1e-14) {
        extra_err = std::exp(-r) * std::pow(r, std::abs(1.0 - b) + 1.0);
    } else if (a > 1.0) {
        // two conjugate exponentially small saddle contributions
        Complex zeta = std::polar(std::pow(r, 1.0 / a), kPi / a);
        Complex e = std::pow(zeta, 1.0 - b) * std::exp(zeta);
        sum.add(2.0 / a * e.real());
    }
    double v = sum.value();
    double rel = v == 0 ? std::numeric_limits<double>::infinity()
                        : (smallest + extra_err) / std::abs(v) + 4e-16;
    return {v, rel, MLBranch::asymptotic};
}

MLResult via_h(const MLParams& p, double r) {
    if (r == 0) return series(p, r);
    auto res = eval(ml_h_spec(p), r, 1e-12);
    double rel = res.value == 0 ? std::numeric_limits<double>::infinity()
                                : res.abs_error_estimate / std::abs(res.value);
    return {res.value, rel, MLBranch::h_function};
}

}  // namespace

HFunctionSpec ml_h_spec(const MLParams& p) {
    HFunctionSpec s;
    s.m = 1;
    s.n = 1;
    s.upper = {{0.0, 1.0}};
    s.lower = {{0.0, 1.0}, {1.0 - p.beta_ml, p.alpha}};
    return s;
}

MLResult ml_eval_detailed(const MLParams& p, double r, MLBranch branch) {
    if (!(p.alpha > 0 && p.alpha < 2)) throw InvalidArgument("Mittag-Leffler alpha must lie in (0,2)");
    if (!(r >= 0)) throw InvalidArgument("Mittag-Leffler argument must be >= 0");
    switch (branch) {
        case MLBranch::series: return series(p, r);
        case MLBranch::asymptotic: return asymptotic(p, r);
        case MLBranch::h_function: return via_h(p, r);
        case MLBranch::automatic: break;
    }
    double scale = std::pow(r, 1.0 / p.alpha);
    if (scale <= 30) {
        auto s = series(p, r);
        if (s.error_estimate <= kAccept) return s;
    }
    if (scale >= 1) {
        auto s = asymptotic(p, r);
        if (s.error_estimate <= kAccept) return s;
    }
    return via_h(p, r);
}

double ml_eval(const MLParams& p, double r) { return ml_eval_detailed(p, r).value; }

}  // namespace foxh
