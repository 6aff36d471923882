#include "gtau/testfn.hpp"

#include "gtau/error.hpp"
#include "gtau/scale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace gtau {

double japanese_bracket(double x) { return std::sqrt(1.0 + x * x); }

Jet bump_profile(const Jet& s) {
    if (std::abs(s[0]) >= 1.0) return Jet::constant(0.0, s.order());
    Jet u = 1.0 + (-(s * s));
    Jet one = Jet::constant(1.0, s.order());
    Jet arg = 1.0 + (-(one / u));
    return exp(arg);
}

namespace {

Jet exp_glue(const Jet& t) {
    if (t[0] <= 0.0) return Jet::constant(0.0, t.order());
    Jet one = Jet::constant(1.0, t.order());
    return exp(-(one / t));
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

Jet smooth_step(const Jet& t) {
    if (t[0] <= 0.0) return Jet::constant(0.0, t.order());
    if (t[0] >= 1.0) return Jet::constant(1.0, t.order());
    Jet e0 = exp_glue(t);
    Jet e1 = exp_glue(1.0 + (-t));
    return e0 / (e0 + e1);
}

Jet interval_cutoff(const Jet& x, double a, double b) {
    double d = 0.25 * (b - a);
    Jet left = (1.0 / d) * (x + Jet::constant(-a, x.order()));
    Jet right = (1.0 / d) * (Jet::constant(b, x.order()) - x);
    return smooth_step(left) * smooth_step(right);
}

TestFunction TestFunction::gaussian(double a, std::vector<double> poly) {
    if (!(a > 0.0)) throw InvalidArgument("gaussian rate must be positive");
    if (poly.empty()) poly = {1.0};
    return TestFunction(GaussianFn{a, std::move(poly)});
}

TestFunction TestFunction::bump(double center, double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("bump radius must be positive");
    return TestFunction(BumpFn{center, radius});
}

TestFunction comb_testfn(std::vector<double> centers, std::vector<int> exponents,
                         double theta_radius) {
    if (centers.empty() || centers.size() != exponents.size())
        throw InvalidArgument("comb needs matching nonempty centers and exponents");
    if (!(theta_radius > 0.0 && theta_radius <= 1.0))
        throw InvalidArgument("comb profile radius must lie in (0,1]");
    for (std::size_t i = 1; i < centers.size(); ++i)
        if (!(centers[i] - centers[i - 1] >= 2.0))
            throw InvalidArgument("comb centers need consecutive gaps >= 2");
    for (int q : exponents)
        if (q < 0) throw InvalidArgument("comb exponents must be natural numbers");
    return TestFunction(CombFn{std::move(centers), std::move(exponents), theta_radius});
}

Jet TestFunction::jet(double x, int order) const {
    Jet X = Jet::variable(x, order);
    if (auto g = std::get_if<GaussianFn>(&desc_)) {
        Jet p = Jet::constant(0.0, order);
        for (std::size_t k = g->poly.size(); k-- > 0;) {
            p = p * X;
            p[0] += g->poly[k];
        }
        return p * exp(-g->a * (X * X));
    }
    if (auto b = std::get_if<BumpFn>(&desc_))
        return bump_profile((1.0 / b->radius) * (X + Jet::constant(-b->center, order)));
    const auto& c = std::get<CombFn>(desc_);
    auto it = std::lower_bound(c.centers.begin(), c.centers.end(), x);
    std::size_t q = std::size_t(it - c.centers.begin());
    if (q == c.centers.size() || (q > 0 && x - c.centers[q - 1] < c.centers[q] - x)) --q;
    double xq = c.centers[q];
    double w = std::pow(japanese_bracket(xq), -double(c.exponents[q]));
    return w * bump_profile((1.0 / c.radius) * (X + Jet::constant(-xq, order)));
}

std::string TestFunction::id() const {
    if (auto g = std::get_if<GaussianFn>(&desc_)) {
        std::string s = "gauss(a=" + num(g->a);
        if (!(g->poly.size() == 1 && g->poly[0] == 1.0)) {
            s += " P=";
            for (std::size_t k = 0; k < g->poly.size(); ++k) s += (k ? ":" : "") + num(g->poly[k]);
        }
        return s + ")";
    }
    if (auto b = std::get_if<BumpFn>(&desc_))
        return "bump(c=" + num(b->center) + " r=" + num(b->radius) + ")";
    const auto& c = std::get<CombFn>(desc_);
    return "comb(n=" + std::to_string(c.centers.size()) + " x0=" + num(c.centers.front()) +
           " x1=" + num(c.centers.back()) + ")";
}

std::vector<std::vector<double>> eval_testfn(const TestFunction& phi,
                                             const std::vector<double>& points, int max_order) {
    if (max_order < 0 || max_order > kTestFnMaxOrder)
        throw DepthExceeded("test function derivative order beyond closed-form depth");
    std::vector<std::vector<double>> rows(max_order + 1, std::vector<double>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        Jet j = phi.jet(points[i], max_order);
        for (int k = 0; k <= max_order; ++k) rows[k][i] = j.derivative(k);
    }
    return rows;
}

Domination dominating_schwartz(const TestFunction& phi, int l) {
    const auto* g = std::get_if<GaussianFn>(&phi.desc());
    if (!g) throw Unsupported("dominating_schwartz is implemented for the gaussian family only");
    if (l < 0) throw InvalidArgument("negative derivative order");
    bool constant_poly = true;
    for (std::size_t k = 1; k < g->poly.size(); ++k)
        if (g->poly[k] != 0.0) constant_poly = false;
    double ratio;
    TestFunction psi = TestFunction::gaussian(constant_poly ? g->a / 2 : g->a / 4);
    if (constant_poly) {
        ratio = std::abs(g->poly[0]);
    } else {
        // sup |P(x)| e^{-a x^2 / 2}; the maximiser sits well inside |x| < 40 / sqrt(a)
        double X = 40.0 / std::sqrt(g->a) + 10.0;
        ratio = 0.0;
        const int n = 400000;
        for (int i = 0; i <= n; ++i) {
            double x = -X + 2 * X * i / n;
            double p = 0.0;
            for (std::size_t k = g->poly.size(); k-- > 0;) p = p * x + g->poly[k];
            ratio = std::max(ratio, std::abs(p) * std::exp(-0.5 * g->a * x * x));
        }
        ratio *= 1.0 + 1e-6;
    }
    return {psi, std::ldexp(ratio, l)};
}

std::vector<TestFunction> default_library() {
    std::vector<double> centers;
    std::vector<int> q;
    for (int k = 0; k <= 18; ++k) {
        centers.push_back(2.0 * k);
        q.push_back(k);
    }
    return {TestFunction::gaussian(1.0), TestFunction::gaussian(0.5),
            TestFunction::gaussian(1.0, {0.0, 0.0, 1.0}), TestFunction::bump(0.0, 1.0),
            comb_testfn(centers, q, 1.0)};
}

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) v.push_back(std::stod(item));
    return v;
}

} // namespace

std::vector<TestFunction> parse_library(std::string_view text) {
    std::vector<TestFunction> lib;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        std::istringstream ls(line);
        std::string family;
        if (!(ls >> family)) continue;
        std::map<std::string, std::string> kv;
        std::string tok;
        while (ls >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw InvalidArgument("library line " + std::to_string(lineno) + ": expected key=value");
            kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        auto get = [&](const std::string& k, double def) {
            auto it = kv.find(k);
            return it == kv.end() ? def : std::stod(it->second);
        };
        if (family == "gaussian") {
            std::vector<double> poly{1.0};
            if (kv.count("poly")) poly = parse_list(kv["poly"]);
            lib.push_back(TestFunction::gaussian(get("a", 1.0), poly));
        } else if (family == "bump") {
            lib.push_back(TestFunction::bump(get("center", 0.0), get("radius", 1.0)));
        } else if (family == "comb") {
            std::vector<double> centers;
            std::vector<int> q;
            if (kv.count("centers")) {
                centers = parse_list(kv["centers"]);
                for (double e : parse_list(kv.at("exponents"))) q.push_back(int(e));
            } else {
                double step = get("step", 2.0);
                int count = int(get("count", 19));
                for (int k = 0; k < count; ++k) {
                    centers.push_back(get("start", 0.0) + step * k);
                    q.push_back(k);
                }
            }
            lib.push_back(comb_testfn(centers, q, get("radius", 1.0)));
        } else {
            throw InvalidArgument("library line " + std::to_string(lineno) + ": unknown family " + family);
        }
    }
    if (lib.empty()) throw InvalidArgument("test-function library is empty");
    return lib;
}

std::vector<TestFunction> load_library(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open library file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_library(ss.str());
}

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        double h = 0.5 * (x[i] - x[i - 1]);
        w[i - 1] += h;
        w[i] += h;
    }
    return w;
}

SeminormSpec SeminormSpec::compact(double k0, double k1, int l) {
    if (!(k0 <= k1) || !std::isfinite(k0) || !std::isfinite(k1))
        throw InvalidArgument("compact set must be a bounded nonempty interval");
    return {CompactSpec{k0, k1, l}};
}
SeminormSpec SeminormSpec::weighted(int r, int l) { return {WeightedSpec{r, l}}; }
SeminormSpec SeminormSpec::schwartz(TestFunction phi, int l) { return {SchwartzSpec{std::move(phi), l}}; }
SeminormSpec SeminormSpec::sobolev(int m) { return {SobolevSpec{m}}; }

int SeminormSpec::order() const {
    return std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SobolevSpec>)
                return s.m;
            else
                return s.l;
        },
        family);
}

std::string SeminormSpec::family_name() const {
    switch (family.index()) {
    case 0: return "compact";
    case 1: return "weighted";
    case 2: return "schwartz";
    default: return "sobolev";
    }
}

std::string SeminormSpec::param() const {
    if (auto c = std::get_if<CompactSpec>(&family)) return "[" + num(c->k0) + " " + num(c->k1) + "]";
    if (auto w = std::get_if<WeightedSpec>(&family)) return "r=" + std::to_string(w->r);
    if (auto s = std::get_if<SchwartzSpec>(&family)) return s->phi.id();
    return "m=" + std::to_string(std::get<SobolevSpec>(family).m);
}

double SeminormValue::value() const { return std::exp(log_value); }

namespace {

double to_log(double sup, double log_scale) {
    if (sup == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(sup) + log_scale;
}

double row_max(const SampledFunction& f, int l, std::size_t i) {
    double m = 0.0;
    for (int k = 0; k <= l; ++k) m = std::max(m, std::abs(f.rows[k][i]));
    return m;
}

} // namespace

SeminormValue seminorm(const SampledFunction& f, const SeminormSpec& spec) {
    int l = spec.order();
    if (l < 0) throw InvalidArgument("negative derivative order");
    if (l > f.max_order()) throw DepthExceeded("semi-norm order exceeds sampled derivative depth");
    if (f.x.empty()) throw InvalidArgument("empty sampled function");

    if (auto c = std::get_if<CompactSpec>(&spec.family)) {
        double sup = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f.x[i] < c->k0 || f.x[i] > c->k1) continue;
            any = true;
            sup = std::max(sup, row_max(f, l, i));
        }
        if (!any) throw InvalidArgument("compact set does not meet the sample grid");
        return {to_log(sup, f.log_scale)};
    }
    if (auto s = std::get_if<SobolevSpec>(&spec.family)) {
        auto w = trapezoid_weights(f.x);
        double sup = 0.0;
        for (int k = 0; k <= s->m; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f.rows[k][i] * f.rows[k][i];
            sup = std::max(sup, std::sqrt(acc));
        }
        return {to_log(sup, f.log_scale)};
    }

    std::vector<double> weight(f.size());
    if (auto w = std::get_if<WeightedSpec>(&spec.family)) {
        for (std::size_t i = 0; i < f.size(); ++i)
            weight[i] = std::pow(1.0 + f.x[i] * f.x[i], 0.5 * w->r);
    } else {
        const auto& sch = std::get<SchwartzSpec>(spec.family);
        for (std::size_t i = 0; i < f.size(); ++i) {
            double v = std::abs(sch.phi(f.x[i]));
            if (f.restricted && v != 0.0)
                v *= interval_cutoff(Jet::constant(f.x[i], 0), f.lo, f.hi).value();
            weight[i] = v;
        }
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (weight[i] == 0.0) continue;
        sup = std::max(sup, weight[i] * row_max(f, l, i));
    }
    SeminormValue out{to_log(sup, f.log_scale)};
    if (!f.restricted && sup > 0.0) {
        double edge = std::max(weight.front() * row_max(f, l, 0),
                               weight.back() * row_max(f, l, f.size() - 1));
        out.truncated = edge >= 1e-3 * sup;
    }
    return out;
}

std::string seminorm_report_csv(const SampledFunction& f, const std::vector<SeminormSpec>& specs) {
    std::string out = "family,param,l,value\n";
    for (const auto& s : specs) {
        auto v = seminorm(f, s);
        out += s.family_name() + "," + s.param() + "," + std::to_string(s.order()) + "," +
               format_log_magnitude(v.log_value) + "\n";
    }
    return out;
}

} // namespace gtau
