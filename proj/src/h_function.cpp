#include "foxh/h_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "foxh/errors.hpp"

namespace foxh {

namespace {

constexpr double kCoincide = 1e-10;
constexpr double kIntTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogPi = 1.14472988584940017414;

struct Factor {
    double a;
    double b;
    int power;
    int source;
};

std::vector<Factor> factors_of(const HFunctionSpec& s) {
    std::vector<Factor> f;
    const int mu = s.mu();
    for (int j = 0; j < s.mu(); ++j) {
        const auto& p = s.lower[j];
        if (j < s.m)
            f.push_back({p.shift, p.scale, +1, j});
        else
            f.push_back({1.0 - p.shift, -p.scale, -1, j});
    }
    for (int j = 0; j < s.nu(); ++j) {
        const auto& p = s.upper[j];
        if (j < s.n)
            f.push_back({1.0 - p.shift, -p.scale, +1, mu + j});
        else
            f.push_back({p.shift, p.scale, -1, mu + j});
    }
    // cancel identical numerator/denominator pairs
    std::vector<bool> dead(f.size(), false);
    for (size_t i = 0; i < f.size(); ++i) {
        if (dead[i] || f[i].power != 1) continue;
        for (size_t k = 0; k < f.size(); ++k) {
            if (dead[k] || f[k].power != -1) continue;
            if (std::abs(f[i].a - f[k].a) < 1e-14 && std::abs(f[i].b - f[k].b) < 1e-14) {
                dead[i] = dead[k] = true;
                break;
            }
        }
    }
    std::vector<Factor> out;
    for (size_t i = 0; i < f.size(); ++i)
        if (!dead[i]) out.push_back(f[i]);
    return out;
}

// u is (numerically) in {0,-1,-2,...}; returns k = -u.
bool singular_arg(double u, int* k) {
    double n = std::nearbyint(u);
    if (n > 0.5 || std::abs(u - n) > kIntTol * std::max(1.0, std::abs(u))) return false;
    if (k) *k = static_cast<int>(-n);
    return true;
}

struct LogLaurent {
    int order = 0;
    double log_abs = -kInf;  // ln|(z-z0)^order kernel(z)| at z0
    int sign = 0;
    double dlog = 0;          // its logarithmic derivative at z0
};

LogLaurent log_laurent(const std::vector<Factor>& fs, double z0) {
    LogLaurent L;
    L.log_abs = 0;
    L.sign = 1;
    for (const auto& f : fs) {
        double u = f.a + f.b * z0;
        int k;
        if (singular_arg(u, &k)) {
            double lk = log_gamma_positive(k + 1.0);
            int sg = ((k % 2) ? -1 : 1) * (f.b > 0 ? 1 : -1);
            double psi = digamma(k + 1.0);
            if (f.power > 0) {
                L.order += 1;
                L.log_abs += -lk - std::log(std::abs(f.b));
            } else {
                L.order -= 1;
                L.log_abs += lk + std::log(std::abs(f.b));
            }
            L.sign *= sg;
            L.dlog += f.power * f.b * psi;
        } else {
            int sg;
            double lg = log_abs_gamma(u, &sg);
            L.log_abs += f.power * lg;
            L.sign *= sg;
            L.dlog += f.power * f.b * digamma(u);
        }
    }
    return L;
}

struct Lattice {
    PoleLattice poles;
    double left_bound = -kInf;  // complete for locations >= left_bound
    double right_bound = kInf;  // complete for locations <= right_bound
};

Lattice build_lattice(const std::vector<Factor>& fs, int depth) {
    struct Cand {
        double z;
        int src;
    };
    Lattice out;
    std::vector<Cand> lc, rc;
    for (const auto& f : fs) {
        if (f.power != 1) continue;
        for (int k = 0; k < depth; ++k) {
            double z = (-k - f.a) / f.b;
            (f.b > 0 ? lc : rc).push_back({z, f.source});
        }
        double last = (-(depth - 1) - f.a) / f.b;
        if (f.b > 0)
            out.left_bound = std::max(out.left_bound, last);
        else
            out.right_bound = std::min(out.right_bound, last);
    }
    auto merge = [&](std::vector<Cand>& c, bool left) {
        std::sort(c.begin(), c.end(), [&](const Cand& x, const Cand& y) {
            return left ? x.z > y.z : x.z < y.z;
        });
        std::vector<Pole> res;
        for (size_t i = 0; i < c.size();) {
            size_t j = i;
            Pole p{c[i].z, 0, {}};
            while (j < c.size() && std::abs(c[j].z - c[i].z) < kCoincide) {
                p.sources.push_back(c[j].src);
                ++j;
            }
            i = j;
            if (left ? p.location < out.left_bound - kCoincide
                     : p.location > out.right_bound + kCoincide)
                break;
            int zeros = 0;
            for (const auto& f : fs)
                if (f.power == -1 && singular_arg(f.a + f.b * p.location, nullptr)) ++zeros;
            p.order = static_cast<int>(p.sources.size()) - zeros;
            if (p.order <= 0) continue;
            if (p.order > 2) {
                std::ostringstream os;
                os << "pole of order " << p.order << " at z = " << p.location;
                throw Unsupported(os.str());
            }
            std::sort(p.sources.begin(), p.sources.end());
            res.push_back(std::move(p));
        }
        return res;
    };
    out.poles.left = merge(lc, true);
    out.poles.right = merge(rc, false);
    return out;
}

// Running sum of terms given as (sign, log|term|).
class ScaledSum {
public:
    void add(int sign, double log_abs) {
        if (sign == 0 || log_abs == -kInf) return;
        if (log_abs > scale_) {
            double f = std::exp(scale_ - log_abs);
            sum_ *= f;
            comp_ *= f;
            abs_ *= f;
            scale_ = log_abs;
        }
        double t = sign * std::exp(log_abs - scale_);
        double s = sum_ + t;
        if (std::abs(sum_) >= std::abs(t))
            comp_ += (sum_ - s) + t;
        else
            comp_ += (t - s) + sum_;
        sum_ = s;
        abs_ += std::abs(t);
    }
    void add_value(double v, double log_scale) {
        if (v == 0) return;
        add(v > 0 ? 1 : -1, std::log(std::abs(v)) + log_scale);
    }
    double mantissa() const { return sum_ + comp_; }
    double scale() const { return scale_ == -kInf ? 0.0 : scale_; }
    double abs_mantissa() const { return abs_; }
    double log_abs() const {
        double m = mantissa();
        return m == 0 ? -kInf : std::log(std::abs(m)) + scale();
    }
    double value() const { return mantissa() * std::exp(scale()); }

private:
    double sum_ = 0, comp_ = 0, abs_ = 0;
    double scale_ = -kInf;
};

double term_log_abs(const LogPolynomialTerm& t, double lr, int* sign) {
    double c = t.coeff_const + t.coeff_log * lr;
    *sign = c > 0 ? 1 : (c < 0 ? -1 : 0);
    if (c == 0) return -kInf;
    return std::log(std::abs(c)) + t.log_scale + t.power_of_r * lr;
}

LogPolynomialTerm residue_from(const std::vector<Factor>& fs, const Pole& p) {
    LogLaurent L = log_laurent(fs, p.location);
    LogPolynomialTerm t;
    t.power_of_r = -p.location;
    t.log_scale = L.log_abs;
    if (L.order == 1) {
        t.coeff_const = L.sign;
    } else if (L.order == 2) {
        t.coeff_const = L.sign * L.dlog;
        t.coeff_log = -L.sign;
    } else if (L.order > 2) {
        throw Unsupported("pole of order > 2");
    }
    return t;
}

EvalResult finish(const ScaledSum& s, double err_mantissa, EvalMethod m) {
    EvalResult r;
    r.method = m;
    r.log_abs = s.log_abs();
    double mant = s.mantissa();
    r.sign = mant > 0 ? 1 : (mant < 0 ? -1 : 0);
    r.value = s.value();
    r.abs_error_estimate = std::abs(err_mantissa) * std::exp(s.scale());
    return r;
}

// ln Gamma(u) with the |sin| factor dropped for u < 1/2.
double smooth_log_gamma(double u) {
    if (u >= 0.5) return log_gamma_positive(u);
    return kLogPi - log_gamma_positive(1.0 - u);
}

double smooth_phi(const std::vector<Factor>& fs, double ell, double lr) {
    double s = -ell * lr;
    for (const auto& f : fs) s += f.power * smooth_log_gamma(f.a + f.b * ell);
    return s;
}

// Nearest singular abscissae of any factor around ell.
void singular_gap(const std::vector<Factor>& fs, double ell, double* lo, double* hi) {
    *lo = -kInf;
    *hi = kInf;
    for (const auto& f : fs) {
        double u = f.a + f.b * ell;
        double below = u > 0 ? 0.0 : std::ceil(u) - 1.0;
        double above = u < 0 ? std::floor(u) + 1.0 : kInf;
        if (above > 0) above = kInf;
        double zb = (below - f.a) / f.b;
        double za = above == kInf ? (f.b > 0 ? kInf : -kInf) : (above - f.a) / f.b;
        if (f.b > 0) {
            *lo = std::max(*lo, zb);
            *hi = std::min(*hi, za);
        } else {
            *hi = std::min(*hi, zb);
            *lo = std::max(*lo, za);
        }
    }
}

struct Prepared {
    HFunctionSpec spec;
    std::vector<Factor> fs;
    DerivedConstants k;
    Lattice lat;
};

Prepared prepare(const HFunctionSpec& spec, int depth) {
    require_valid(spec);
    Prepared p{spec, factors_of(spec), derived_constants(spec), {}};
    p.lat = build_lattice(p.fs, depth);
    return p;
}

Complex log_kernel(const std::vector<Factor>& fs, Complex z) {
    Complex s = 0;
    for (const auto& f : fs) s += double(f.power) * log_gamma(f.a + f.b * z);
    return s;
}

struct LineChoice {
    double ell;
    std::vector<const Pole*> right_crossed;  // subtracted
    std::vector<const Pole*> left_crossed;   // added
};

LineChoice choose_line(const Prepared& P, double lr) {
    const auto& L = P.lat.poles;
    double wlo = L.left.empty() ? -kInf : L.left[0].location;
    double whi = L.right.empty() ? kInf : L.right[0].location;
    double h0;
    if (std::isfinite(wlo) && std::isfinite(whi))
        h0 = 0.5 * (wlo + whi);
    else if (std::isfinite(wlo))
        h0 = wlo + 1.0;
    else if (std::isfinite(whi))
        h0 = whi - 1.0;
    else
        h0 = 0.0;

    auto phi = [&](double e) { return smooth_phi(P.fs, e, lr); };
    double best_ell = h0, best_score = phi(h0), best_step = 0.25;
    const double penalty = 0.05;

    for (int dir : {+1, -1}) {
        const auto& side = dir > 0 ? L.right : L.left;
        double bound = dir > 0 ? P.lat.right_bound : P.lat.left_bound;
        size_t idx = 0;
        // poles already inside the home strip on this side are not crossed
        double ell = h0, runmax = -kInf, prev = phi(h0);
        int crossed = 0;
        for (int it = 0; it < 4000; ++it) {
            double step = 0.25 + 0.02 * std::abs(ell - h0);
            double next = ell + dir * step;
            if (dir > 0 ? next > bound : next < bound) break;
            while (idx < side.size() &&
                   (dir > 0 ? side[idx].location < next : side[idx].location > next)) {
                runmax = std::max(runmax, phi(side[idx].location));
                ++crossed;
                ++idx;
            }
            if (crossed > 150) break;
            double pn = phi(next);
            double score = std::max(runmax, pn) + penalty * crossed;
            if (score < best_score) {
                best_score = score;
                best_ell = next;
                best_step = step;
            }
            if (runmax > best_score + 50) break;
            if (pn < runmax - 36) break;  // line part already negligible
            if (pn > best_score + 50 && pn > prev) break;
            prev = pn;
            ell = next;
        }
    }

    // local refinement inside the gap between effective poles
    auto eff_gap = [&](double e, double* lo, double* hi) {
        *lo = -kInf;
        *hi = kInf;
        for (const auto* side : {&L.left, &L.right})
            for (const auto& p : *side) {
                if (p.location < e) *lo = std::max(*lo, p.location);
                if (p.location > e) *hi = std::min(*hi, p.location);
            }
    };
    double glo, ghi;
    eff_gap(best_ell, &glo, &ghi);
    double a = std::max(best_ell - best_step, glo + 1e-6);
    double b = std::min(best_ell + best_step, ghi - 1e-6);
    if (b > a) {
        const double gr = 0.6180339887498949;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = phi(c), fd = phi(d);
        for (int it = 0; it < 40 && b - a > 2e-2; ++it) {
            if (fc < fd) {
                b = d; d = c; fd = fc;
                c = b - gr * (b - a); fc = phi(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + gr * (b - a); fd = phi(d);
            }
        }
        double cand = 0.5 * (a + b);
        if (phi(cand) < phi(best_ell)) best_ell = cand;
    }

    // keep away from every individual gamma singularity
    double slo, shi;
    singular_gap(P.fs, best_ell, &slo, &shi);
    double margin = 0.5;
    if (std::isfinite(slo) && std::isfinite(shi)) margin = std::min(0.5, 0.25 * (shi - slo));
    double ell = best_ell;
    if (std::isfinite(slo)) ell = std::max(ell, slo + margin);
    if (std::isfinite(shi)) ell = std::min(ell, shi - margin);
    if (std::isfinite(slo) && std::isfinite(shi) && shi - slo < 2 * margin) ell = 0.5 * (slo + shi);

    LineChoice lc{ell, {}, {}};
    for (const auto& p : L.right)
        if (p.location < ell) lc.right_crossed.push_back(&p);
    for (const auto& p : L.left)
        if (p.location > ell) lc.left_crossed.push_back(&p);
    return lc;
}

using GK21 = boost::math::quadrature::gauss_kronrod<double, 21>;

// Bisection on [a,b] until the Kronrod error is below abs_tol.
template <class F>
double adaptive_gk(F& f, double a, double b, double abs_tol, int depth, double* err, double* l1) {
    double e = 0, L = 0;
    double v = GK21::integrate(f, a, b, 0, 0.0, &e, &L);
    // rounding in the log-gamma sums caps the attainable relative accuracy
    if (e <= abs_tol || e <= 1e-13 * L || depth <= 0) {
        *err += e;
        *l1 += L;
        return v;
    }
    double m = 0.5 * (a + b);
    return adaptive_gk(f, a, m, 0.5 * abs_tol, depth - 1, err, l1) +
           adaptive_gk(f, m, b, 0.5 * abs_tol, depth - 1, err, l1);
}

// (1/pi) int_0^inf Re[kernel(ell+iy) r^{-ell-iy}] e^{-S} dy
double line_integral(const Prepared& P, double ell, double lr, double S, double tol,
                     double* err) {
    auto f = [&](double y) {
        Complex z(ell, y);
        Complex lg = log_kernel(P.fs, z) - z * lr - S;
        if (lg.real() < -745) return 0.0;
        return std::exp(lg).real();
    };
    // panel width from the curvature of the real-axis profile
    double h = 1e-3 * std::max(1.0, std::abs(ell));
    double c2 = (smooth_phi(P.fs, ell + h, lr) - 2 * smooth_phi(P.fs, ell, lr) +
                 smooth_phi(P.fs, ell - h, lr)) / (h * h);
    // capped by the vertical decay length, c2 vanishes at inflections
    double w = 1.0;
    if (c2 > 0) w = std::clamp(0.5 / std::sqrt(c2), 1.0, std::max(1.0, 8.0 / P.k.alpha_star));
    const double w0 = w;
    // the integrand is normalised to about one at y = 0
    double y = 0, total = 0, l1 = 0, e = 0;
    int quiet = 0;
    for (int panel = 0; panel < 20000; ++panel) {
        double pe = 0, pl1 = 0;
        double target = 0.05 * tol * std::max({std::abs(total), 1e-3 * l1, 1e-300});
        if (panel == 0) target = 0.05 * tol * 1e-3;
        double v = adaptive_gk(f, y, y + w, target, 10, &pe, &pl1);
        total += v;
        l1 += pl1;
        e += pe;
        y += w;
        if (panel >= 4) w = std::min(1.25 * w, 8.0 * w0);
        if (pl1 <= 1e-3 * tol * std::max(std::abs(total), 1e-3 * l1))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 3 && panel >= 3) break;
    }
    *err = (e + 2.2e-16 * 50 * l1) / kPi;
    return total / kPi;
}

}  // namespace

// ---------------------------------------------------------------------------

ValidationReport validate(const HFunctionSpec& s) {
    std::ostringstream os;
    if (s.m < 0 || s.m > s.mu()) {
        os << "m = " << s.m << " outside [0, mu = " << s.mu() << "]";
        return {false, os.str()};
    }
    if (s.n < 0 || s.n > s.nu()) {
        os << "n = " << s.n << " outside [0, nu = " << s.nu() << "]";
        return {false, os.str()};
    }
    for (int j = 0; j < s.nu(); ++j)
        if (!(s.upper[j].scale > 0) || !std::isfinite(s.upper[j].shift)) {
            os << "upper scale gamma_" << j + 1 << " = " << s.upper[j].scale << " must be > 0";
            return {false, os.str()};
        }
    for (int j = 0; j < s.mu(); ++j)
        if (!(s.lower[j].scale > 0) || !std::isfinite(s.lower[j].shift)) {
            os << "lower scale delta_" << j + 1 << " = " << s.lower[j].scale << " must be > 0";
            return {false, os.str()};
        }
    double left = -kInf, right = kInf;
    for (int j = 0; j < s.m; ++j) left = std::max(left, -s.lower[j].shift / s.lower[j].scale);
    for (int j = 0; j < s.n; ++j)
        right = std::min(right, (1.0 - s.upper[j].shift) / s.upper[j].scale);
    if (!(left < right)) {
        os << "separation fails: max(-d_j/delta_j) = " << left
           << " is not below min((1-c_j)/gamma_j) = " << right;
        return {false, os.str()};
    }
    return {true, {}};
}

void require_valid(const HFunctionSpec& spec) {
    auto v = validate(spec);
    if (!v.ok) throw InvalidArgument("invalid H-function spec: " + v.message);
}

DerivedConstants derived_constants(const HFunctionSpec& s) {
    DerivedConstants k{0, 0, 0, 1};
    double sum_d = 0, sum_c = 0, sum_delta = 0, sum_gamma = 0, log_eta = 0;
    for (int j = 0; j < s.nu(); ++j) {
        const auto& p = s.upper[j];
        k.alpha_star += j < s.n ? p.scale : -p.scale;
        sum_c += p.shift;
        sum_gamma += p.scale;
        log_eta -= p.scale * std::log(p.scale);
    }
    for (int j = 0; j < s.mu(); ++j) {
        const auto& p = s.lower[j];
        k.alpha_star += j < s.m ? p.scale : -p.scale;
        sum_d += p.shift;
        sum_delta += p.scale;
        log_eta += p.scale * std::log(p.scale);
    }
    k.Lambda = sum_d - sum_c + (s.nu() - s.mu()) / 2.0;
    k.omega = sum_delta - sum_gamma;
    k.eta = std::exp(log_eta);
    return k;
}

std::vector<GammaFactor> gamma_factors(const HFunctionSpec& spec) {
    std::vector<GammaFactor> out;
    for (const auto& f : factors_of(spec)) out.push_back({f.a, f.b, f.power});
    return out;
}

Complex log_mellin_kernel(const HFunctionSpec& spec, Complex z) {
    return log_kernel(factors_of(spec), z);
}

PoleLattice pole_lattice(const HFunctionSpec& spec, int depth) {
    require_valid(spec);
    if (depth < 1) throw InvalidArgument("pole_lattice: depth must be >= 1");
    return build_lattice(factors_of(spec), depth).poles;
}

double LogPolynomialTerm::operator()(double r) const {
    double lr = std::log(r);
    return (coeff_const + coeff_log * lr) * std::exp(log_scale + power_of_r * lr);
}

double LogPolynomialTerm::log_abs(double r) const {
    int s;
    return term_log_abs(*this, std::log(r), &s);
}

LogPolynomialTerm residue_term(const HFunctionSpec& spec, const Pole& pole) {
    return residue_from(factors_of(spec), pole);
}

LaurentData laurent_at(const HFunctionSpec& spec, double z0) {
    LogLaurent L = log_laurent(factors_of(spec), z0);
    LaurentData d;
    d.order = L.order;
    if (L.order <= 0) return d;
    double v = L.sign * std::exp(L.log_abs);
    if (L.order == 1) {
        d.residue = v;
    } else if (L.order == 2) {
        d.second = v;
        d.residue = v * L.dlog;
    } else {
        throw Unsupported("pole of order > 2");
    }
    return d;
}

std::string to_string(EvalMethod m) {
    switch (m) {
        case EvalMethod::residue_series: return "residue_series";
        case EvalMethod::bromwich: return "bromwich";
        case EvalMethod::tail_expansion: return "tail_expansion";
    }
    return "?";
}

EvalResult eval_residue_series(const HFunctionSpec& spec, double r, double tol, int max_terms) {
    if (!(r > 0)) throw InvalidArgument("H-function argument must be positive");
    Prepared P = prepare(spec, max_terms + 8);
    double om = P.k.omega;
    bool left;
    if (om > 1e-12)
        left = true;
    else if (om < -1e-12)
        left = false;
    else if (r < P.k.eta)
        left = true;
    else if (r > P.k.eta)
        left = false;
    else
        throw InvalidArgument("omega = 0 and r = eta: residue series undefined");

    const auto& poles = left ? P.lat.poles.left : P.lat.poles.right;
    const int sgn = left ? 1 : -1;
    double lr = std::log(r);
    ScaledSum sum;
    int small = 0, used = 0;
    double last_logs[3] = {-kInf, -kInf, -kInf};
    bool converged = false;
    for (const auto& p : poles) {
        if (used >= max_terms) break;
        auto t = residue_from(P.fs, p);
        int s;
        double la = term_log_abs(t, lr, &s);
        sum.add(sgn * s, la);
        last_logs[used % 3] = la;
        ++used;
        double lp = sum.log_abs();
        if (la == -kInf || la < std::log(tol) + lp)
            ++small;
        else
            small = 0;
        if (small >= 3) {
            converged = true;
            break;
        }
    }
    bool side_has_factors = false;
    for (const auto& f : P.fs)
        if (f.power == 1 && (left ? f.b > 0 : f.b < 0)) side_has_factors = true;
    if (!side_has_factors) converged = true;
    double tail = 0;
    for (double l : last_logs)
        if (l > -kInf) tail += std::exp(l - sum.scale());
    // rounding in the individual terms, amplified by cancellation
    tail += 4e-15 * sum.abs_mantissa();
    if (!converged) {
        throw ConvergenceError("residue series did not converge within max_terms",
                               tail * std::exp(sum.scale()));
    }
    if (sum.abs_mantissa() > 1e3 * std::abs(sum.mantissa()) && tail > std::max(tol, 1e-13) * std::abs(sum.mantissa()))
        throw ConvergenceError("residue series lost its accuracy to cancellation", tail * std::exp(sum.scale()));
    EvalResult res = finish(sum, tail, EvalMethod::residue_series);
    res.terms = used;
    return res;
}

Window bromwich_window(const HFunctionSpec& spec) {
    auto L = pole_lattice(spec, 4);
    return {L.left.empty() ? -kInf : L.left[0].location,
            L.right.empty() ? kInf : L.right[0].location};
}

EvalResult eval_bromwich(const HFunctionSpec& spec, double r, double tol,
                         std::optional<double> ell) {
    if (!(r > 0)) throw InvalidArgument("H-function argument must be positive");
    Prepared P = prepare(spec, 256);
    if (!(P.k.alpha_star > 0))
        throw Unsupported("Bromwich contour needs alpha* > 0");
    double lr = std::log(r);
    LineChoice lc;
    if (ell) {
        const auto& L = P.lat.poles;
        double lo = L.left.empty() ? -kInf : L.left[0].location;
        double hi = L.right.empty() ? kInf : L.right[0].location;
        if (!(*ell > lo && *ell < hi)) {
            std::ostringstream os;
            os << "ell = " << *ell << " outside the pole-free strip (" << lo << ", " << hi << ")";
            throw InvalidArgument(os.str());
        }
        lc.ell = *ell;
    } else {
        lc = choose_line(P, lr);
    }
    double S = smooth_phi(P.fs, lc.ell, 0.0);
    try {
        S = std::max(S, log_kernel(P.fs, Complex(lc.ell, 0.0)).real());
    } catch (const PoleError&) {
        // ell sits on a cancelled pole/zero pair; the smooth profile suffices
    }
    S -= lc.ell * lr;
    double err = 0;
    double I = line_integral(P, lc.ell, lr, S, tol, &err);
    ScaledSum sum;
    sum.add_value(I, S);
    for (const auto* p : lc.right_crossed) {
        int s;
        double la = term_log_abs(residue_from(P.fs, *p), lr, &s);
        sum.add(-s, la);
    }
    for (const auto* p : lc.left_crossed) {
        int s;
        double la = term_log_abs(residue_from(P.fs, *p), lr, &s);
        sum.add(s, la);
    }
    double err_m = err * std::exp(S - sum.scale()) + 1e-15 * sum.abs_mantissa();
    EvalResult res = finish(sum, err_m, EvalMethod::bromwich);
    res.ell = lc.ell;
    res.crossed_poles = static_cast<int>(lc.right_crossed.size() + lc.left_crossed.size());
    return res;
}

EvalResult eval(const HFunctionSpec& spec, double r, double tol) {
    if (!(r > 0)) throw InvalidArgument("H-function argument must be positive");
    require_valid(spec);
    auto k = derived_constants(spec);
    bool series = false;
    if (k.omega > 1e-12)
        series = r <= k.eta / 2;
    else if (k.omega < -1e-12)
        series = r >= 2 * k.eta;
    else
        series = r <= k.eta / 2 || r >= 2 * k.eta;
    if (series) {
        try {
            return eval_residue_series(spec, r, tol);
        } catch (const ConvergenceError&) {
            if (!(k.alpha_star > 0)) throw;
        }
    }
    return eval_bromwich(spec, r, tol);
}

TailExpansion tail_expansion(const HFunctionSpec& spec, double r, int p) {
    if (!(r > 0)) throw InvalidArgument("H-function argument must be positive");
    if (p < 0) throw InvalidArgument("tail_expansion: p must be >= 0");
    Prepared P = prepare(spec, p + 4);
    if (!(P.k.alpha_star > 0)) throw Unsupported("tail expansion needs alpha* > 0");
    bool large = P.k.omega >= 0;
    const auto& poles = large ? P.lat.poles.right : P.lat.poles.left;
    if (static_cast<int>(poles.size()) < p + 1)
        throw InvalidArgument("tail_expansion: p exceeds the available pole lattice");
    double lr = std::log(r);
    ScaledSum sum;
    for (int k = 0; k <= p; ++k) {
        int s;
        double la = term_log_abs(residue_from(P.fs, poles[k]), lr, &s);
        sum.add(large ? -s : s, la);
    }
    TailExpansion t;
    t.value = sum.value();
    double next = static_cast<int>(poles.size()) > p + 1 ? poles[p + 1].location : (large ? kInf : -kInf);
    t.remainder_lo = large ? poles[p].location : -poles[p].location;
    t.remainder_hi = large ? next : -next;
    return t;
}

double exp_decay_envelope(const HFunctionSpec& spec, double r) {
    Prepared P = prepare(spec, 8);
    if (!(P.k.alpha_star > 0) || !(P.k.omega > 0))
        throw Unsupported("exponential envelope needs alpha* > 0 and omega > 0");
    if (!P.lat.poles.right.empty())
        throw Unsupported("exponential envelope needs an empty right pole lattice");
    double tail_delta = 0;
    for (int j = spec.m; j < spec.mu(); ++j) tail_delta += spec.lower[j].scale;
    const auto& k = P.k;
    return (k.Lambda + 0.5) / k.omega * std::log(r) +
           std::cos((k.alpha_star + tail_delta) / k.omega * kPi) * k.omega *
               std::pow(r / k.eta, 1.0 / k.omega);
}

HFunctionSpec derivative_spec(const HFunctionSpec& spec) {
    HFunctionSpec s = spec;
    s.lower.insert(s.lower.begin(), ParamPair{1.0, 1.0});
    s.m += 1;
    s.upper.push_back(ParamPair{0.0, 1.0});
    return s;
}

}  // namespace foxh
