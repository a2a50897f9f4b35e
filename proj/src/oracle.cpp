#include "foxh/oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "foxh/errors.hpp"
#include "foxh/mittag_leffler.hpp"

namespace foxh {

void require_valid(const QuadratureConfig& cfg) {
    if (cfg.max_panels <= 0 || cfg.tail_cutoff <= 0 || !(cfg.tol > 0))
        throw InvalidArgument("quadrature settings must be positive");
    switch (cfg.panel_points) {
        case 10: case 15: case 20: case 25: case 30: return;
        default: throw InvalidArgument("panel_points must be one of 10, 15, 20, 25, 30");
    }
}

double bessel_j(double order, double r) {
    if (order < -0.5 - 1e-12) throw InvalidArgument("Bessel order must be >= -1/2");
    if (r < 0) throw InvalidArgument("Bessel argument must be nonnegative");
    if (r == 0) {
        if (order < 0) return std::numeric_limits<double>::infinity();
        return order == 0 ? 1.0 : 0.0;
    }
    if (std::abs(order + 0.5) < 1e-12) return std::sqrt(2 / (kPi * r)) * std::cos(r);
    if (std::abs(order - 0.5) < 1e-12) return std::sqrt(2 / (kPi * r)) * std::sin(r);
    return boost::math::cyl_bessel_j(order, r);
}

namespace {

template <int N>
double gl(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss<double, N>::integrate(f, a, b);
}

double panel(const std::function<double(double)>& f, double a, double b, int pts) {
    switch (pts) {
        case 10: return gl<10>(f, a, b);
        case 15: return gl<15>(f, a, b);
        case 25: return gl<25>(f, a, b);
        case 30: return gl<30>(f, a, b);
        default: return gl<20>(f, a, b);
    }
}

// Bisect until the two halves agree with the whole to rel * max(|whole|, ref).
double adaptive_panel(const std::function<double(double)>& f, double a, double b, int pts, double rel, double ref,
                      double whole, int depth = 0) {
    double m = 0.5 * (a + b);
    double l = panel(f, a, m, pts), r = panel(f, m, b, pts);
    if (std::abs(l + r - whole) <= rel * std::max(std::abs(whole), ref) || depth >= 16) return l + r;
    return adaptive_panel(f, a, m, pts, rel, ref, l, depth + 1) + adaptive_panel(f, m, b, pts, rel, ref, r, depth + 1);
}

// E_{alpha,b}(-z) tabulated as Chebyshev pieces in w = ln z. The quadrature
// needs thousands of symbol values per point and the intermediate range of z
// is the expensive one for ml_eval; pieces are built on first use and shared
// between points with the same (alpha, b).
class MLTable {
public:
    MLTable(double alpha, double b) : p_{alpha, b} {}

    double operator()(double z) {
        if (z < kZlo || z > kZhi) return ml_eval(p_, z);
        double w = std::log(z);
        int j = static_cast<int>(std::floor((w - kWlo) / kH));
        const Piece& pc = piece(j);
        if (pc.direct) return ml_eval(p_, z);
        double x = 2 * (w - (kWlo + j * kH)) / kH - 1;
        // Clenshaw
        double b1 = 0, b2 = 0;
        for (int k = kN - 1; k >= 1; --k) {
            double b0 = 2 * x * b1 - b2 + pc.c[k];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + pc.c[0];
    }

private:
    static constexpr int kN = 24;
    static constexpr double kH = 0.25;
    static constexpr double kWlo = -4;
    static constexpr double kZlo = 0.018315638888734179;  // e^-4
    static constexpr double kZhi = 1e4;

    struct Piece {
        std::vector<double> c;
        bool direct = false;
    };

    const Piece& piece(int j) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = pieces_.find(j);
        if (it != pieces_.end()) return it->second;
        Piece pc;
        std::vector<double> f(kN);
        double fmax = 0;
        for (int i = 0; i < kN; ++i) {
            double x = std::cos(kPi * (i + 0.5) / kN);
            f[i] = ml_eval(p_, std::exp(kWlo + j * kH + 0.5 * kH * (x + 1)));
            fmax = std::max(fmax, std::abs(f[i]));
        }
        pc.c.assign(kN, 0.0);
        for (int k = 0; k < kN; ++k) {
            double acc = 0;
            for (int i = 0; i < kN; ++i) acc += f[i] * std::cos(kPi * k * (i + 0.5) / kN);
            pc.c[k] = 2 * acc / kN;
        }
        pc.c[0] *= 0.5;
        pc.direct = std::abs(pc.c[kN - 1]) + std::abs(pc.c[kN - 2]) > 1e-14 * fmax;
        return pieces_.emplace(j, std::move(pc)).first->second;
    }

    MLParams p_;
    std::mutex mu_;
    std::map<int, Piece> pieces_;
};

MLTable& ml_table(double alpha, double b) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, std::unique_ptr<MLTable>> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = tables[{alpha, b}];
    if (!slot) slot = std::make_unique<MLTable>(alpha, b);
    return *slot;
}

// Best estimate from Wynn's epsilon table over the sequence s.
double wynn_epsilon(const std::vector<double>& s) {
    const size_t n = s.size();
    std::vector<double> prev(n + 1, 0.0), cur(s.begin(), s.end());
    double best = s.back();
    for (size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        for (size_t i = 0; i + k < n; ++i) {
            double diff = cur[i + 1] - cur[i];
            if (diff == 0) return k % 2 ? cur[i + 1] : best;
            next[i] = prev[i + 1] + 1 / diff;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) best = cur.back();
    }
    return best;
}

}  // namespace

InversionResult p_via_inversion_detailed(const KernelParams& p, const SpaceTimePoint& pt, const QuadratureConfig& cfg) {
    require_valid(p);
    require_valid(cfg);
    if (!p.integrable()) throw InvalidArgument("non-integrable regime");
    if (p.d > 4) throw Unsupported("inversion oracle supports d <= 4");
    if (!(pt.t > 0)) throw InvalidArgument("t must be positive");
    if (static_cast<int>(pt.x.size()) != p.d) throw InvalidArgument("x must have d components");
    const double rho = norm(pt.x);
    if (!(rho > 0)) throw PoleError("kernel is singular at x = 0");

    const double nu = 0.5 * p.d - 1;
    const double t = pt.t;
    MLTable& ml = ml_table(p.alpha, 1 - p.sigma);
    const double ta = std::pow(t, p.alpha), ts = std::pow(t, -p.sigma);
    // symbol |xi|^{2 gamma} t^{-sigma} E_{alpha,1-sigma}(-t^alpha |xi|^{2 beta}) at xi = u / rho
    auto f = [&](double u) {
        double bes = p.d == 1 ? std::sqrt(2 / kPi) * std::cos(u) : std::pow(u, 0.5 * p.d) * bessel_j(nu, u);
        double xi = u / rho;
        double sym = ts * ml(ta * std::pow(xi, 2 * p.beta));
        if (p.gamma != 0) sym *= std::pow(xi, 2 * p.gamma);
        return sym * bes;
    };
    const double pre = std::pow(2 * kPi, -0.5 * p.d) * std::pow(rho, -p.d);

    // For alpha > 1 the symbol carries a damped oscillation exp(cos(pi/alpha) z^{1/alpha});
    // the tail starts once it is negligible.
    double z_tail = cfg.tail_cutoff;
    if (p.alpha > 1) z_tail = std::max(z_tail, std::pow(25 / std::abs(std::cos(kPi / p.alpha)), p.alpha));
    const double u_tail = rho * std::pow(z_tail / std::pow(t, p.alpha), 1 / (2 * p.beta));
    const double u_scale = rho * std::pow(t, -p.alpha / (2 * p.beta));

    auto zero = [&](int k) { return (k + 0.75 + 0.5 * nu) * kPi; };

    InversionResult res;
    double sum = 0;
    const double prel = 1e-2 * cfg.tol;
    auto integrate = [&](double a, double b) {
        return adaptive_panel(f, a, b, cfg.panel_points, prel, std::abs(sum), panel(f, a, b, cfg.panel_points));
    };
    // geometric grading towards u = 0
    double z0 = zero(0);
    double lo = z0 * 1e-9;
    sum += integrate(0, lo);
    for (double a = lo; a < z0;) {
        double b = std::min(z0, a * 4);
        sum += integrate(a, b);
        a = b;
    }
    int k = 0;
    std::vector<double> partial;
    double last_est = NAN, last_diff = INFINITY;
    int small_terms = 0;
    while (k < cfg.max_panels) {
        double a = zero(k), b = zero(k + 1);
        double term = integrate(a, b);
        sum += term;
        ++k;
        // plain convergence: the symbol has died out
        if (b > u_scale && std::abs(term) <= 1e-3 * cfg.tol * std::abs(sum)) {
            if (++small_terms >= 3) {
                res.value = pre * sum;
                res.error_estimate = pre * std::abs(term);
                res.panels = k;
                return res;
            }
        } else {
            small_terms = 0;
        }
        if (b < u_tail) continue;
        partial.push_back(sum);
        if (partial.size() > 40) partial.erase(partial.begin());
        if (partial.size() < 8) continue;
        double est = wynn_epsilon(partial);
        double diff = std::abs(est - last_est);
        if (std::isfinite(diff) && std::max(diff, last_diff) <= cfg.tol * std::max(std::abs(est), 1e-300)) {
            res.value = pre * est;
            res.error_estimate = pre * std::max(diff, last_diff);
            res.panels = k;
            return res;
        }
        if (std::isfinite(diff)) last_diff = diff;
        last_est = est;
    }
    double err = std::isfinite(last_diff) ? pre * last_diff : INFINITY;
    throw ConvergenceError("Fourier inversion did not converge", err);
}

double p_via_inversion(const KernelParams& p, const SpaceTimePoint& pt, const QuadratureConfig& cfg) {
    return p_via_inversion_detailed(p, pt, cfg).value;
}

double closed_form_reference(ClassicalFamily family, int d, double t, const std::vector<double>& x) {
    if (d < 1 || static_cast<int>(x.size()) != d) throw InvalidArgument("x must have d components");
    if (!(t > 0)) throw InvalidArgument("t must be positive");
    double r = norm(x);
    if (family == ClassicalFamily::gaussian) return std::pow(4 * kPi * t, -0.5 * d) * std::exp(-r * r / (4 * t));
    double h = 0.5 * (d + 1);
    return std::exp(std::lgamma(h) - h * std::log(kPi)) * t * std::pow(t * t + r * r, -h);
}

double closed_form_reference(ClassicalFamily family, const KernelParams& p, double t, const std::vector<double>& x) {
    auto eq = [](double a, double b) { return std::abs(a - b) < 1e-12; };
    bool ok = eq(p.alpha, 1) && eq(p.gamma, 0) && eq(p.sigma, 0) &&
              (family == ClassicalFamily::gaussian ? eq(p.beta, 1) : eq(p.beta, 0.5));
    if (!ok) throw InvalidArgument("parameters do not belong to the requested classical family");
    return closed_form_reference(family, p.d, t, x);
}

namespace {

struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;  // divide by h^order
};

Stencil central(int order) {
    switch (order) {
        case 0: return {{0}, {1}};
        case 1: return {{-1, 1}, {-0.5, 0.5}};
        case 2: return {{-1, 0, 1}, {1, -2, 1}};
        case 3: return {{-2, -1, 1, 2}, {-0.5, 1, -1, 0.5}};
        default: throw InvalidArgument("finite difference order must be 1, 2 or 3");
    }
}

double tensor_difference(const ScalarField& f, const std::vector<double>& point, const std::vector<int>& a, double h) {
    const size_t d = point.size();
    std::vector<Stencil> st;
    int total = 0;
    for (size_t i = 0; i < d; ++i) {
        st.push_back(central(a[i]));
        total += a[i];
    }
    std::vector<size_t> idx(d, 0);
    double acc = 0;
    while (true) {
        std::vector<double> q = point;
        double w = 1;
        for (size_t i = 0; i < d; ++i) {
            q[i] += st[i].offsets[idx[i]] * h;
            w *= st[i].weights[idx[i]];
        }
        acc += w * f(q);
        size_t i = 0;
        while (i < d && ++idx[i] == st[i].offsets.size()) idx[i++] = 0;
        if (i == d) break;
    }
    return acc / std::pow(h, total);
}

}  // namespace

double finite_difference(const ScalarField& f, const std::vector<double>& point, const std::vector<double>& direction,
                         int order, double h) {
    if (!(h > 0)) throw InvalidArgument("step must be positive");
    if (direction.size() != point.size()) throw InvalidArgument("direction must match the point dimension");
    double n = norm(direction);
    if (!(n > 0)) throw InvalidArgument("direction must be nonzero");
    Stencil s = central(order);
    if (order == 0) throw InvalidArgument("finite difference order must be 1, 2 or 3");
    double acc = 0;
    for (size_t j = 0; j < s.offsets.size(); ++j) {
        std::vector<double> q = point;
        for (size_t i = 0; i < q.size(); ++i) q[i] += s.offsets[j] * h * direction[i] / n;
        acc += s.weights[j] * f(q);
    }
    return acc / std::pow(h, order);
}

double finite_difference_multi(const ScalarField& f, const std::vector<double>& point, const std::vector<int>& a,
                               double h) {
    if (!(h > 0)) throw InvalidArgument("step must be positive");
    if (a.size() != point.size()) throw InvalidArgument("multi-index must match the point dimension");
    int total = 0;
    for (int v : a) {
        if (v < 0 || v > 3) throw InvalidArgument("multi-index entries must lie in 0..3");
        total += v;
    }
    if (total == 0) return f(point);
    double coarse = tensor_difference(f, point, a, h);
    double fine = tensor_difference(f, point, a, h / 2);
    return (4 * fine - coarse) / 3;
}

}  // namespace foxh
