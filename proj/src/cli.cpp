#include "foxh/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "foxh/acceptance.hpp"
#include "foxh/asymptotics.hpp"
#include "foxh/errors.hpp"
#include "foxh/oracle.hpp"
#include "foxh/regression.hpp"

namespace foxh {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(trim(s), &pos);
        if (pos != trim(s).size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("cannot read " + what + " from '" + s + "'");
    }
}

int to_int(const std::string& s, const std::string& what) {
    double v = to_double(s, what);
    if (v != std::nearbyint(v)) throw InvalidArgument(what + " must be an integer");
    return static_cast<int>(v);
}

OutputFormat to_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw InvalidArgument("format must be csv or json");
}

std::string g17(double v) {
    if (v == 0) v = 0.0;  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    std::string s = trim(spec);
    if (s.empty()) throw InvalidArgument("empty grid");
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
        if (parts.size() != 3) throw InvalidArgument("grid '" + s + "' must read a:b:k");
        double a = to_double(parts[0], "grid start"), b = to_double(parts[1], "grid end");
        int k = to_int(parts[2], "grid count");
        if (k < 1) throw InvalidArgument("grid count must be positive");
        if (!(a > 0 && b > 0)) throw InvalidArgument("log-spaced grid needs positive end points");
        if (k == 1) return {a};
        return log_space(a, b, k);
    }
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(to_double(item, "grid value"));
    return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    static const char* keys[] = {"d", "alpha", "beta", "gamma", "sigma", "n", "tol", "t_grid", "x_grid", "M_grid", "format"};
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        bool known = false;
        for (const char* key : keys) known = known || k == key;
        if (!known) throw InvalidArgument("config line " + std::to_string(line_no) + ": unknown key '" + k + "'");
        kv[k] = v;
    }
    return kv;
}

RunConfig apply_config(RunConfig c, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "d") c.params.d = to_int(v, "d");
        else if (k == "alpha") c.params.alpha = to_double(v, "alpha");
        else if (k == "beta") c.params.beta = to_double(v, "beta");
        else if (k == "gamma") c.params.gamma = to_double(v, "gamma");
        else if (k == "sigma") c.params.sigma = to_double(v, "sigma");
        else if (k == "n") c.n = to_int(v, "n");
        else if (k == "tol") c.tol = to_double(v, "tol");
        else if (k == "t_grid") c.t_grid = parse_grid(v);
        else if (k == "x_grid") c.x_grid = parse_grid(v);
        else if (k == "M_grid") c.M_grid = parse_grid(v);
        else if (k == "format") c.format = to_format(v);
        else throw InvalidArgument("unknown key '" + k + "'");
    }
    return c;
}

void require_valid(const RunConfig& c) {
    require_valid(c.params);
    if (c.n < 0 || c.n > 6) throw InvalidArgument("derivative order n must lie in 0..6");
    if (!(c.tol >= 1e-14 && c.tol <= 1e-2)) throw InvalidArgument("tol must lie in [1e-14, 1e-2]");
    if (c.t_grid.empty()) throw InvalidArgument("t grid is empty");
    if (c.x_grid.empty() && c.M_grid.empty()) throw InvalidArgument("x grid is empty");
    for (double t : c.t_grid)
        if (!(t > 0)) throw InvalidArgument("t values must be positive");
    for (double x : c.x_grid)
        if (!(x > 0)) throw InvalidArgument("|x| values must be positive");
    for (double m : c.M_grid)
        if (!(m > 0)) throw InvalidArgument("M values must be positive");
}

namespace {

struct GridPoint {
    double t;
    double x;
    double M;
};

std::vector<GridPoint> grid_points(const RunConfig& c) {
    std::vector<GridPoint> pts;
    const auto& p = c.params;
    for (double t : c.t_grid) {
        if (!c.M_grid.empty()) {
            for (double M : c.M_grid) pts.push_back({t, std::pow(M * std::pow(t, p.alpha), 1 / (2 * p.beta)), M});
        } else {
            for (double x : c.x_grid) pts.push_back({t, x, similarity(p, t, x).M});
        }
    }
    return pts;
}

// Evaluates fn on every index with a pool of threads; results land in index order.
template <class Row>
std::vector<Row> parallel_rows(size_t count, const std::function<Row(size_t)>& fn) {
    std::vector<Row> rows(count);
    std::vector<std::exception_ptr> errs(count);
    std::atomic<size_t> next{0};
    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16));
    workers = static_cast<unsigned>(std::min<size_t>(workers, std::max<size_t>(count, 1)));
    auto work = [&] {
        for (size_t i; (i = next++) < count;) {
            try {
                rows[i] = fn(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    // first failure in grid order, so the reported error does not depend on scheduling
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return rows;
}

json config_json(const RunConfig& c) {
    return {{"d", c.params.d},         {"alpha", c.params.alpha}, {"beta", c.params.beta},
            {"gamma", c.params.gamma}, {"sigma", c.params.sigma}, {"n", c.n},
            {"tol", c.tol},            {"t_grid", c.t_grid},      {"x_grid", c.M_grid.empty() ? json(c.x_grid) : json(nullptr)},
            {"M_grid", c.M_grid.empty() ? json(nullptr) : json(c.M_grid)}};
}

void require_integrable(const KernelParams& p) {
    if (!p.integrable()) throw InvalidArgument("non-integrable regime");
}

struct EvalRow {
    double t = 0, x = 0, M = 0, value = 0, err = 0;
    std::string method, flags;
};

EvalRow eval_point(const RunConfig& c, const GridPoint& g) {
    const auto& p = c.params;
    KernelValue v;
    if (c.n == 0) {
        std::vector<double> x(p.d, 0.0);
        x[0] = g.x;
        v = p_eval_detailed(p, {g.t, x}, c.tol);
    } else {
        // diagonal point, away from the coordinate hyperplanes
        std::vector<double> x(p.d, g.x / std::sqrt(double(p.d)));
        std::vector<int> a(p.d, 0);
        a[0] = c.n;
        v = p_derivative_detailed(p, {g.t, x}, a, c.tol);
    }
    return {g.t, g.x, g.M, v.value, v.abs_error, to_string(v.method), v.flags};
}

void cmd_eval(const RunConfig& c, std::ostream& out) {
    require_integrable(c.params);
    auto pts = grid_points(c);
    auto rows = parallel_rows<EvalRow>(pts.size(), [&](size_t i) { return eval_point(c, pts[i]); });
    if (c.format == OutputFormat::csv) {
        out << "t,x_norm,M,value,abs_err,method,flags\n";
        for (const auto& r : rows)
            out << g17(r.t) << ',' << g17(r.x) << ',' << g17(r.M) << ',' << g17(r.value) << ',' << g17(r.err) << ','
                << r.method << ',' << r.flags << '\n';
        return;
    }
    json jr = json::array();
    double max_err = 0;
    int flagged = 0;
    for (const auto& r : rows) {
        jr.push_back({{"t", r.t}, {"x_norm", r.x}, {"M", r.M}, {"value", num(r.value)}, {"abs_err", num(r.err)},
                      {"method", r.method}, {"flags", r.flags}});
        max_err = std::max(max_err, r.err);
        flagged += !r.flags.empty();
    }
    json doc = {{"config", config_json(c)},
                {"rows", jr},
                {"summary", {{"rows", rows.size()}, {"max_abs_err", max_err}, {"flagged_rows", flagged}}}};
    out << doc.dump(2) << '\n';
}

struct RegimeRow {
    Side side;
    RegimeCase c;
    RegimeCase bound;
};

std::vector<RegimeRow> regime_rows(const RunConfig& c) {
    std::vector<RegimeRow> rows;
    for (Side s : {Side::large_M, Side::small_M}) rows.push_back({s, classify(c.params, c.n, s), bound_case(c.params, c.n, s)});
    return rows;
}

void cmd_regime(const RunConfig& c, std::ostream& out) {
    auto rows = regime_rows(c);
    if (c.format == OutputFormat::csv) {
        out << "side,theorem,case,branch,applicable,unverified,bound_theorem,bound_case,note\n";
        for (const auto& r : rows)
            out << to_string(r.side) << ',' << to_string(r.c.theorem) << ',' << r.c.case_label << ',' << r.c.branch << ','
                << r.c.applicable << ',' << r.c.unverified_flag << ',' << to_string(r.bound.theorem) << ','
                << r.bound.case_label << ",\"" << r.c.note << "\"\n";
        return;
    }
    json jr = json::array();
    for (const auto& r : rows)
        jr.push_back({{"side", to_string(r.side)},
                      {"theorem", to_string(r.c.theorem)},
                      {"case", r.c.case_label},
                      {"branch", r.c.branch},
                      {"applicable", r.c.applicable},
                      {"unverified", r.c.unverified_flag},
                      {"bound_theorem", to_string(r.bound.theorem)},
                      {"bound_case", r.bound.case_label},
                      {"note", r.c.note}});
    json doc = {{"config", config_json(c)}, {"rows", jr}, {"summary", {{"integrable", c.params.integrable()}}}};
    out << doc.dump(2) << '\n';
}

struct EnvelopeRow {
    Side side;
    RegimeCase c;
    Envelope e;
    double x_slope = NAN, t_slope = NAN, fitted_rate = NAN, band = NAN;
};

void cmd_envelope(const RunConfig& c, std::ostream& out) {
    require_integrable(c.params);
    const auto& p = c.params;
    std::vector<EnvelopeRow> rows;
    for (Side s : {Side::large_M, Side::small_M}) {
        EnvelopeRow r{s, classify(p, c.n, s), {}};
        if (r.c.applicable) {
            r.e = envelope(p, c.n, s);
            double lo = s == Side::large_M ? 1e3 : 1e-6, hi = s == Side::large_M ? 1e5 : 1e-4;
            if (r.e.exp_rate > 0) {
                // p underflows beyond M ~ 1e3 in the stretched-exponential case
                lo = 10;
                hi = 1e3;
                r.fitted_rate = -exp_rate_fit(p, lo, hi).slope;
            } else {
                r.x_slope = x_slope(p, c.n, s, 1.0, lo, hi).fit.slope;
                r.t_slope = t_slope(p, c.n, s, 1.0, lo, hi).fit.slope;
            }
            r.band = ratio_check(p, c.n, s, log_space(lo, hi, 9)).band;
        }
        rows.push_back(r);
    }
    if (c.format == OutputFormat::csv) {
        out << "side,theorem,case,branch,applicable,x_power,t_power,log_factor,exp_rate,two_sided,x_slope,t_slope,"
               "fitted_exp_rate,ratio_band\n";
        for (const auto& r : rows)
            out << to_string(r.side) << ',' << to_string(r.c.theorem) << ',' << r.c.case_label << ',' << r.c.branch << ','
                << r.c.applicable << ',' << g17(r.e.x_power) << ',' << g17(r.e.t_power) << ',' << r.e.log_factor << ','
                << g17(r.e.exp_rate) << ',' << r.e.two_sided << ',' << g17(r.x_slope) << ',' << g17(r.t_slope) << ','
                << g17(r.fitted_rate) << ',' << g17(r.band) << '\n';
        return;
    }
    json jr = json::array();
    for (const auto& r : rows)
        jr.push_back({{"side", to_string(r.side)},
                      {"theorem", to_string(r.c.theorem)},
                      {"case", r.c.case_label},
                      {"branch", r.c.branch},
                      {"applicable", r.c.applicable},
                      {"x_power", r.e.x_power},
                      {"t_power", r.e.t_power},
                      {"log_factor", r.e.log_factor},
                      {"exp_rate", r.e.exp_rate},
                      {"two_sided", r.e.two_sided},
                      {"x_slope", num(r.x_slope)},
                      {"t_slope", num(r.t_slope)},
                      {"fitted_exp_rate", num(r.fitted_rate)},
                      {"ratio_band", num(r.band)}});
    json doc = {{"config", config_json(c)}, {"rows", jr}, {"summary", {{"rows", rows.size()}}}};
    out << doc.dump(2) << '\n';
}

struct OracleRow {
    double t = 0, x = 0, M = 0, mellin = 0, oracle = 0, rel = 0;
};

void cmd_oracle_compare(const RunConfig& c, std::ostream& out) {
    require_integrable(c.params);
    if (c.params.d > 4) throw InvalidArgument("oracle comparison supports d <= 4");
    if (c.n != 0) throw InvalidArgument("oracle comparison is for n = 0");
    auto pts = grid_points(c);
    auto rows = parallel_rows<OracleRow>(pts.size(), [&](size_t i) {
        const auto& g = pts[i];
        std::vector<double> x(c.params.d, 0.0);
        x[0] = g.x;
        double m = p_eval(c.params, {g.t, x}, c.tol);
        double o = p_via_inversion(c.params, {g.t, x});
        return OracleRow{g.t, g.x, g.M, m, o, std::abs(m - o) / std::max(std::abs(m), 1e-300)};
    });
    double worst = 0;
    for (const auto& r : rows) worst = std::max(worst, r.rel);
    if (c.format == OutputFormat::csv) {
        out << "t,x_norm,M,mellin_value,oracle_value,rel_diff\n";
        for (const auto& r : rows)
            out << g17(r.t) << ',' << g17(r.x) << ',' << g17(r.M) << ',' << g17(r.mellin) << ',' << g17(r.oracle) << ','
                << g17(r.rel) << '\n';
        out << "# max_rel_diff=" << g17(worst) << '\n';
        return;
    }
    json jr = json::array();
    for (const auto& r : rows)
        jr.push_back({{"t", r.t}, {"x_norm", r.x}, {"M", r.M}, {"mellin_value", r.mellin}, {"oracle_value", r.oracle},
                      {"rel_diff", r.rel}});
    json doc = {{"config", config_json(c)}, {"rows", jr}, {"summary", {{"rows", rows.size()}, {"max_rel_diff", worst}}}};
    out << doc.dump(2) << '\n';
}

int cmd_selfcheck(const std::string& level, double tol, OutputFormat format, std::ostream& out) {
    if (level != "quick" && level != "full") throw InvalidArgument("selfcheck level must be quick or full");
    std::ostringstream progress;
    auto suites = selfcheck(level == "full", tol, format == OutputFormat::csv ? &out : &progress);
    int failed = 0, passed = 0;
    for (const auto& s : suites) {
        failed += s.failed;
        passed += s.passed;
    }
    if (format == OutputFormat::csv) {
        out << (failed ? "FAIL" : "PASS") << "  selfcheck " << level << ": " << passed << " checks passed, " << failed
            << " failed\n";
    } else {
        json js = json::array();
        for (const auto& s : suites)
            js.push_back({{"suite", s.name}, {"passed", s.passed}, {"failed", s.failed}, {"seconds", s.seconds}});
        json doc = {{"config", {{"level", level}, {"tol", tol}}},
                    {"rows", js},
                    {"summary", {{"passed", passed}, {"failed", failed}}}};
        out << doc.dump(2) << '\n';
    }
    return failed ? 1 : 0;
}

struct Flags {
    std::string d, alpha, beta, gamma, sigma, n, t, x, M, tol, format, config, out;
};

void add_common(CLI::App* sc, Flags& f) {
    sc->add_option("--d", f.d, "spatial dimension");
    sc->add_option("--alpha", f.alpha, "time order in (0,2)");
    sc->add_option("--beta", f.beta, "space order > 0");
    sc->add_option("--gamma", f.gamma, "Laplacian power >= 0");
    sc->add_option("--sigma", f.sigma, "time derivative order");
    sc->add_option("--n", f.n, "derivative order along x_1");
    sc->add_option("--t", f.t, "t grid: v | v1,v2,... | a:b:k");
    sc->add_option("--x", f.x, "|x| grid");
    sc->add_option("--M", f.M, "M grid (replaces --x)");
    sc->add_option("--tol", f.tol, "tolerance in [1e-14, 1e-2]");
    sc->add_option("--format", f.format, "csv | json");
    sc->add_option("--config", f.config, "key=value config file");
    sc->add_option("--out", f.out, "write output to this file");
}

// CLI flags > config file > defaults.
RunConfig build_config(const Flags& f) {
    RunConfig c;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw InvalidArgument("cannot open config file '" + f.config + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        c = apply_config(c, parse_config_text(ss.str()));
    }
    std::map<std::string, std::string> kv;
    auto put = [&](const char* k, const std::string& v) {
        if (!v.empty()) kv[k] = v;
    };
    put("d", f.d);
    put("alpha", f.alpha);
    put("beta", f.beta);
    put("gamma", f.gamma);
    put("sigma", f.sigma);
    put("n", f.n);
    put("tol", f.tol);
    put("t_grid", f.t);
    put("x_grid", f.x);
    put("M_grid", f.M);
    put("format", f.format);
    c = apply_config(c, kv);
    if (!f.x.empty() && f.M.empty()) c.M_grid.clear();
    require_valid(c);
    return c;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fundamental solutions of space-time fractional diffusion via Fox H-functions"};
    app.require_subcommand(1);
    Flags f;
    auto* ev = app.add_subcommand("eval", "evaluate p (or D^n_{x_1} p) on a grid");
    auto* en = app.add_subcommand("envelope", "asymptotic case, exponents, fitted slopes and ratio band");
    auto* rg = app.add_subcommand("regime", "asymptotic case labels for small and large M");
    auto* oc = app.add_subcommand("oracle-compare", "Mellin-Barnes values against Fourier inversion");
    auto* sc = app.add_subcommand("selfcheck", "run the self-check suites");
    for (auto* s : {ev, en, rg, oc}) add_common(s, f);
    std::string level = "quick";
    sc->add_option("level", level, "quick | full");
    sc->add_option("--tol", f.tol, "tolerance handed to every evaluation");
    sc->add_option("--format", f.format, "csv | json");
    sc->add_option("--out", f.out, "write output to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        std::ofstream file;
        std::ostream* dst = &out;
        if (!f.out.empty()) {
            file.open(f.out, std::ios::binary);
            if (!file) throw InvalidArgument("cannot open output file '" + f.out + "'");
            dst = &file;
        }
        if (sc->parsed()) {
            double tol = f.tol.empty() ? kDefaultTol : to_double(f.tol, "tol");
            if (!(tol >= 1e-14 && tol <= 1e-2)) throw InvalidArgument("tol must lie in [1e-14, 1e-2]");
            OutputFormat fmt = f.format.empty() ? OutputFormat::csv : to_format(f.format);
            return cmd_selfcheck(level, tol, fmt, *dst);
        }
        RunConfig c = build_config(f);
        if (ev->parsed()) cmd_eval(c, *dst);
        else if (en->parsed()) cmd_envelope(c, *dst);
        else if (rg->parsed()) cmd_regime(c, *dst);
        else cmd_oracle_compare(c, *dst);
        return 0;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const PoleError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << " (achieved error " << e.achieved_error << ")\n";
        return 3;
    } catch (const Unsupported& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace foxh
