#include "foxh/regression.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "foxh/errors.hpp"

namespace foxh {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw InvalidArgument("fit_line needs >= 3 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw InvalidArgument("fit_line: abscissae are all equal");
    LinearFit f;
    f.n = static_cast<int>(x.size());
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - f.intercept - f.slope * x[i];
        sse += e * e;
    }
    f.r2 = syy > 0 ? 1 - sse / syy : 1.0;
    double s2 = sse / (n - 2);
    f.slope_se = std::sqrt(s2 / sxx);
    f.intercept_se = std::sqrt(s2 * (1 / n + mx * mx / sxx));
    return f;
}

bool slope_significant(const LinearFit& f, double level) {
    if (f.slope_se == 0) return f.slope != 0;
    boost::math::students_t dist(f.n - 2);
    double crit = boost::math::quantile(dist, 0.5 + 0.5 * level);
    return std::abs(f.slope) / f.slope_se > crit;
}

std::vector<double> log_space(double a, double b, int k) {
    if (!(a > 0 && b > 0) || k < 1) throw InvalidArgument("log_space needs a, b > 0 and k >= 1");
    if (k == 1) return {a};
    std::vector<double> v(k);
    double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < k; ++i) v[i] = std::exp(la + (lb - la) * i / (k - 1));
    v.front() = a;
    v.back() = b;
    return v;
}

}  // namespace foxh
