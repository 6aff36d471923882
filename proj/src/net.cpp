#include "gtau/net.hpp"

#include "gtau/error.hpp"
#include "net_internal.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace gtau {

namespace detail {

std::string format_number(double v) { return gtau::format_number(v); }

} // namespace detail

using detail::NodeValue;

// ---- catalog functions ----

SmoothFn SmoothFn::polynomial(std::vector<double> c) {
    if (c.empty()) c = {0.0};
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    SmoothFn f;
    f.kind = SmoothKind::polynomial;
    f.poly = std::move(c);
    return f;
}

SmoothFn SmoothFn::sine(double w, double p) {
    SmoothFn f;
    f.kind = SmoothKind::sine;
    f.freq = w;
    f.freq_power = p;
    return f;
}

SmoothFn SmoothFn::cosine(double w, double p) {
    SmoothFn f = sine(w, p);
    f.kind = SmoothKind::cosine;
    return f;
}

SmoothFn SmoothFn::gaussian(double b) {
    if (!(b > 0.0)) throw InvalidArgument("gauss rate must be positive");
    SmoothFn f;
    f.kind = SmoothKind::gaussian;
    f.rate = b;
    return f;
}

SmoothFn SmoothFn::erf_step() {
    SmoothFn f;
    f.kind = SmoothKind::erf_step;
    return f;
}

SmoothFn SmoothFn::bump(double c, double r) {
    if (!(r > 0.0)) throw InvalidArgument("bump radius must be positive");
    SmoothFn f;
    f.kind = SmoothKind::bump;
    f.center = c;
    f.radius = r;
    return f;
}

double SmoothFn::frequency(double eps) const {
    return freq_power == 0.0 ? freq : freq * std::pow(eps, -freq_power);
}

namespace {

Jet horner(const std::vector<double>& c, const Jet& X) {
    Jet r = Jet::constant(c.back(), X.order());
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        r = r * X;
        r[0] += c[k];
    }
    return r;
}

} // namespace

Jet SmoothFn::jet(double x, int order, double eps) const {
    Jet X = Jet::variable(x, order);
    switch (kind) {
    case SmoothKind::polynomial: return horner(poly, X);
    case SmoothKind::sine: return sin(frequency(eps) * X);
    case SmoothKind::cosine: return cos(frequency(eps) * X);
    case SmoothKind::gaussian: return exp(-rate * (X * X));
    case SmoothKind::erf_step: return erf(X);
    case SmoothKind::bump: {
        Jet s = (1.0 / radius) * (X + Jet::constant(-center, order));
        return bump_profile(s);
    }
    }
    return Jet::constant(0.0, order);
}

std::string SmoothFn::to_string() const {
    std::string s;
    switch (kind) {
    case SmoothKind::polynomial:
        if (poly == std::vector<double>{1.0}) return "one";
        if (poly == std::vector<double>{0.0, 1.0}) return "x";
        s = "poly(";
        for (std::size_t k = 0; k < poly.size(); ++k) s += (k ? "," : "") + format_number(poly[k]);
        return s + ")";
    case SmoothKind::sine:
    case SmoothKind::cosine:
        s = kind == SmoothKind::sine ? "sin" : "cos";
        if (freq == 1.0 && freq_power == 0.0) return s;
        s += "(" + format_number(freq);
        if (freq_power != 0.0) s += "," + format_number(freq_power);
        return s + ")";
    case SmoothKind::gaussian: return rate == 1.0 ? "gauss" : "gauss(" + format_number(rate) + ")";
    case SmoothKind::erf_step: return "erf";
    case SmoothKind::bump: return "bump(" + format_number(center) + "," + format_number(radius) + ")";
    }
    return "?";
}

SmoothFn smooth_catalog(std::string_view name) {
    if (name == "one") return SmoothFn::polynomial({1.0});
    if (name == "x") return SmoothFn::polynomial({0.0, 1.0});
    if (name == "x2") return SmoothFn::polynomial({0.0, 0.0, 1.0});
    if (name == "x3") return SmoothFn::polynomial({0.0, 0.0, 0.0, 1.0});
    if (name == "sin") return SmoothFn::sine();
    if (name == "cos") return SmoothFn::cosine();
    if (name == "gauss") return SmoothFn::gaussian();
    if (name == "erf") return SmoothFn::erf_step();
    if (name == "bump") return SmoothFn::bump();
    if (name == "exp" || name == "expx2" || name == "expsq" || name == "cosh" || name == "sinh")
        throw InvalidArgument(std::string(name) + " grows faster than any polynomial, not in O_M");
    throw InvalidArgument("unknown catalog function '" + std::string(name) + "'");
}

SmoothFn product(const SmoothFn& f, const SmoothFn& g) {
    if (f.kind != SmoothKind::polynomial || g.kind != SmoothKind::polynomial)
        throw Unsupported("closed-form products only for polynomials");
    std::vector<double> c(f.poly.size() + g.poly.size() - 1, 0.0);
    for (std::size_t i = 0; i < f.poly.size(); ++i)
        for (std::size_t j = 0; j < g.poly.size(); ++j) c[i + j] += f.poly[i] * g.poly[j];
    return SmoothFn::polynomial(std::move(c));
}

std::string to_string(const DistributionDesc& d) {
    struct V {
        std::string operator()(const DeltaDerivative& v) const {
            if (v.k == 0 && v.center == 0.0) return "delta";
            std::string s = "delta(" + std::to_string(v.k);
            if (v.center != 0.0) s += "," + format_number(v.center);
            return s + ")";
        }
        std::string operator()(const Heaviside& v) const {
            return v.center == 0.0 ? "heaviside" : "heaviside(" + format_number(v.center) + ")";
        }
        std::string operator()(const PolynomialDist& v) const {
            return SmoothFn::polynomial(v.coeffs).to_string();
        }
        std::string operator()(const SmoothOM& v) const { return v.f.to_string(); }
        std::string operator()(const SampledL2&) const { return "sampled"; }
    };
    return std::visit(V{}, d);
}

double DriftLaw::at(double eps) const {
    double d = kind == sqrtlog ? std::sqrt(std::abs(std::log(eps))) : c;
    if (!std::isfinite(d)) throw InvalidArgument("drift law not finite at eps = " + format_number(eps));
    return d;
}

std::string DriftLaw::to_string() const {
    return kind == sqrtlog ? "sqrtlog" : "const(" + format_number(c) + ")";
}

// ---- construction ----

namespace {

NetExpr make(Node n) { return NetExpr(std::make_shared<const Node>(std::move(n))); }

void need(const NetExpr& e) {
    if (e.empty()) throw InvalidArgument("empty net operand");
}

void need_rho(const std::shared_ptr<const Mollifier>& rho) {
    if (!rho) throw InvalidArgument("mollified net needs a mollifier");
}

} // namespace

NetExpr embed(SmoothFn f) {
    Node n{NodeKind::embed};
    n.fn = std::move(f);
    return make(std::move(n));
}

NetExpr mollified(DistributionDesc d, std::shared_ptr<const Mollifier> rho) {
    need_rho(rho);
    if (auto* dd = std::get_if<DeltaDerivative>(&d); dd && (dd->k < 0 || dd->k > kMaxDerive))
        throw InvalidArgument("delta derivative order must lie in 0..8");
    if (auto* s = std::get_if<SampledL2>(&d); s && s->values.empty())
        throw InvalidArgument("sampled distribution without values");
    Node n{NodeKind::mollified};
    n.dist = std::move(d);
    n.rho = std::move(rho);
    return make(std::move(n));
}

NetExpr defect(SmoothFn f, std::shared_ptr<const Mollifier> rho) {
    need_rho(rho);
    Node n{NodeKind::defect};
    n.fn = std::move(f);
    n.rho = std::move(rho);
    return make(std::move(n));
}

NetExpr add(NetExpr a, NetExpr b) {
    need(a);
    need(b);
    Node n{NodeKind::add};
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return make(std::move(n));
}

NetExpr sub(NetExpr a, NetExpr b) { return add(std::move(a), scale({-1.0}, std::move(b))); }

NetExpr mul(NetExpr a, NetExpr b) {
    need(a);
    need(b);
    Node n{NodeKind::mul};
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return make(std::move(n));
}

NetExpr scale(GeneralizedConstant c, NetExpr a) {
    need(a);
    Node n{NodeKind::scale};
    n.c = c;
    n.lhs = std::move(a);
    return make(std::move(n));
}

NetExpr derive(int k, NetExpr a) {
    need(a);
    if (k < 0 || k > kMaxDerive) throw InvalidArgument("derive order must lie in 0..8");
    Node n{NodeKind::derive};
    n.order = k;
    n.lhs = std::move(a);
    return make(std::move(n));
}

NetExpr drift(NetExpr a, DriftLaw law) {
    need(a);
    if (law.kind == DriftLaw::constant && !std::isfinite(law.c)) throw InvalidArgument("drift constant not finite");
    Node n{NodeKind::drift};
    n.drift = law;
    n.lhs = std::move(a);
    return make(std::move(n));
}

NetExpr fourier_node(NetExpr a) {
    need(a);
    Node n{NodeKind::fourier};
    n.lhs = std::move(a);
    return make(std::move(n));
}

NetExpr inv_fourier_node(NetExpr a) {
    need(a);
    Node n{NodeKind::inv_fourier};
    n.lhs = std::move(a);
    return make(std::move(n));
}

NetExpr restrict(NetExpr e, double a, double b) {
    need(e);
    if (!(a < b)) throw InvalidArgument("restriction to an empty interval");
    Node n{NodeKind::restrict};
    n.a = a;
    n.b = b;
    n.lhs = std::move(e);
    return make(std::move(n));
}

namespace {

std::string scalar_string(const GeneralizedConstant& c) {
    std::vector<std::string> f;
    if (c.coeff != 1.0 || (c.eps_power == 0.0 && c.inv_eps == 0.0 && c.log_power == 0.0))
        f.push_back(format_number(c.coeff));
    if (c.eps_power != 0.0) f.push_back("pow(" + format_number(c.eps_power) + ")");
    if (c.inv_eps != 0.0) f.push_back("exp(" + format_number(c.inv_eps) + ")");
    if (c.log_power != 0.0) f.push_back("logpow(" + format_number(c.log_power) + ")");
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "*" : "") + f[i];
    return s;
}

} // namespace

std::string NetExpr::to_string() const {
    if (!node_) return "<empty>";
    const Node& n = *node_;
    switch (n.kind) {
    case NodeKind::embed: return "embed(" + n.fn.to_string() + ")";
    case NodeKind::mollified: return "mollify(" + gtau::to_string(n.dist) + ")";
    case NodeKind::defect: return "defect(" + n.fn.to_string() + ")";
    case NodeKind::add: return "add(" + n.lhs.to_string() + "," + n.rhs.to_string() + ")";
    case NodeKind::mul: return "mul(" + n.lhs.to_string() + "," + n.rhs.to_string() + ")";
    case NodeKind::scale: return "scale(" + scalar_string(n.c) + "," + n.lhs.to_string() + ")";
    case NodeKind::derive: return "derive(" + std::to_string(n.order) + "," + n.lhs.to_string() + ")";
    case NodeKind::drift: return "drift(" + n.lhs.to_string() + "," + n.drift.to_string() + ")";
    case NodeKind::restrict:
        return "restrict(" + n.lhs.to_string() + "," + format_number(n.a) + "," + format_number(n.b) + ")";
    case NodeKind::fourier: return "fourier(" + n.lhs.to_string() + ")";
    case NodeKind::inv_fourier: return "ifourier(" + n.lhs.to_string() + ")";
    }
    return "?";
}

// ---- evaluation ----

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval domain_of(const Node& n, double eps) {
    switch (n.kind) {
    case NodeKind::restrict: {
        Interval c = domain_of(n.lhs.node(), eps);
        return {std::max(c.lo, n.a), std::min(c.hi, n.b)};
    }
    case NodeKind::drift: {
        Interval c = domain_of(n.lhs.node(), eps);
        double d = n.drift.at(eps);
        return {c.lo + d, c.hi + d};
    }
    case NodeKind::add:
    case NodeKind::mul: {
        Interval a = domain_of(n.lhs.node(), eps), b = domain_of(n.rhs.node(), eps);
        return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    }
    case NodeKind::scale:
    case NodeKind::derive: return domain_of(n.lhs.node(), eps);
    default: return {-kInf, kInf};
    }
}

// bounded support of the slice, if known
bool support_of(const Node& n, double eps, Interval& s) {
    switch (n.kind) {
    case NodeKind::embed:
        if (n.fn.kind != SmoothKind::bump) return false;
        s = {n.fn.center - n.fn.radius, n.fn.center + n.fn.radius};
        return true;
    case NodeKind::scale:
    case NodeKind::derive: return support_of(n.lhs.node(), eps, s);
    case NodeKind::restrict: {
        if (!support_of(n.lhs.node(), eps, s)) s = {n.a, n.b};
        s = {std::max(s.lo, n.a), std::min(s.hi, n.b)};
        return true;
    }
    case NodeKind::drift: {
        if (!support_of(n.lhs.node(), eps, s)) return false;
        double d = n.drift.at(eps);
        s = {s.lo + d, s.hi + d};
        return true;
    }
    case NodeKind::mul: {
        Interval a, b;
        bool ha = support_of(n.lhs.node(), eps, a), hb = support_of(n.rhs.node(), eps, b);
        if (ha && hb) s = {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
        else if (ha) s = a;
        else if (hb) s = b;
        return ha || hb;
    }
    case NodeKind::add: {
        Interval a, b;
        if (!support_of(n.lhs.node(), eps, a) || !support_of(n.rhs.node(), eps, b)) return false;
        s = {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
        return true;
    }
    default: return false;
    }
}

void collect_patches(const Node& n, double eps, double shift, const EvalConfig& cfg, std::vector<Patch>& out) {
    switch (n.kind) {
    case NodeKind::mollified:
        if (auto* d = std::get_if<DeltaDerivative>(&n.dist))
            out.push_back(mollifier_patch(*n.rho, d->center + shift, eps, cfg));
        else if (auto* h = std::get_if<Heaviside>(&n.dist))
            out.push_back(mollifier_patch(*n.rho, h->center + shift, eps, cfg));
        return;
    case NodeKind::drift: collect_patches(n.lhs.node(), eps, shift + n.drift.at(eps), cfg, out); return;
    case NodeKind::add:
    case NodeKind::mul:
        collect_patches(n.lhs.node(), eps, shift, cfg, out);
        collect_patches(n.rhs.node(), eps, shift, cfg, out);
        return;
    case NodeKind::scale:
    case NodeKind::derive:
    case NodeKind::restrict: collect_patches(n.lhs.node(), eps, shift, cfg, out); return;
    default: return;
    }
}

NodeValue zeros(std::size_t n, int order) { return {std::vector<Jet>(n, Jet::constant(0.0, order)), 0.0}; }

// log of a bound on sup_x |d^m (f * rho_eps - f)|, m <= order, via the transform mass beyond the flat band
double defect_log_bound(const SmoothFn& f, const Mollifier& rho, double eps, int order) {
    double xc = (rho.center_frequency() - rho.glue_width()) / eps;
    double b = f.kind == SmoothKind::gaussian ? f.rate : 1.0;
    double amp = f.kind == SmoothKind::gaussian ? std::sqrt(M_PI / b) : 2.0 / xc;
    double m = std::max(order, 0);
    double q = xc / (2.0 * b) - m / xc;
    if (q <= 0.0) return kInf;
    return m * std::log(std::max(xc, 1.0)) - xc * xc / (4.0 * b) - std::log(q) + std::log(amp / M_PI);
}

Jet spectral_defect(const SmoothFn& f, const Mollifier& rho, double eps, double x, int order) {
    double xc = (rho.center_frequency() - rho.glue_width()) / eps;
    double b = f.kind == SmoothKind::gaussian ? f.rate : 1.0;
    double xe = std::sqrt(xc * xc + 200.0 * b);
    double width = std::min(M_PI / (4.0 * std::max(1.0, std::abs(x))), (xe - xc) / 8.0);
    int panels = int(std::ceil((xe - xc) / width));
    width = (xe - xc) / panels;
    const auto& g = detail::gl();
    Jet X = Jet::variable(x, order), acc = Jet::constant(0.0, order);
    for (int p = 0; p < panels; ++p) {
        double lo = xc + p * width, mid = lo + 0.5 * width;
        for (int i = 0; i < detail::kGL; ++i) {
            double xi = mid + 0.5 * width * g.x[std::size_t(i)];
            double damp = rho.spectrum(eps * xi) - 1.0;
            double w = 0.5 * width * g.w[std::size_t(i)] * damp / M_PI;
            if (w == 0.0) continue;
            Jet s, c;
            sincos(xi * X, s, c);
            if (f.kind == SmoothKind::gaussian) acc += (w * std::sqrt(M_PI / b) * std::exp(-xi * xi / (4.0 * b))) * c;
            else acc += (w * 2.0 * std::exp(-xi * xi / 4.0) / xi) * s;
        }
    }
    return acc;
}

// D = f * rho_eps - f on the catalog
void defect_jets(const SmoothFn& f, const Mollifier& rho, const std::vector<double>& x, double eps, int order,
                 std::vector<Jet>& out, bool add_f) {
    switch (f.kind) {
    case SmoothKind::polynomial:
        // sum_k f^(k)(x) (-eps)^k m_k / k!, with m_0 = 1 and m_k = 0 beyond
        for (std::size_t i = 0; i < x.size(); ++i) {
            Jet fx = f.jet(x[i], order + int(f.poly.size()), eps);
            Jet r = Jet::constant(0.0, order);
            double em = 1.0;
            for (int k = 1; k < int(f.poly.size()); ++k) {
                em *= -eps;
                double mk = rho.exact_moment(k);
                if (mk == 0.0) continue;
                Jet d = differentiate(fx, k);
                d.truncate(order);
                r += (em * mk / factorial(k)) * d;
            }
            out[i] = add_f ? r + f.jet(x[i], order, eps) : r;
        }
        return;
    case SmoothKind::sine:
    case SmoothKind::cosine: {
        double damp = rho.spectrum(eps * f.frequency(eps)) - (add_f ? 0.0 : 1.0);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = damp == 0.0 ? Jet::constant(0.0, order) : damp * f.jet(x[i], order, eps);
        return;
    }
    case SmoothKind::gaussian:
    case SmoothKind::erf_step: {
        double lb = defect_log_bound(f, rho, eps, order);
        // below the double resolution of the slice itself the correction cannot register
        bool skip = add_f ? lb < std::log(1e-18) : lb < -740.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            Jet d = skip ? Jet::constant(0.0, order) : spectral_defect(f, rho, eps, x[i], order);
            out[i] = add_f ? d + f.jet(x[i], order, eps) : d;
        }
        return;
    }
    case SmoothKind::bump: throw Unsupported("bump * rho_eps has no closed form on this grid");
    }
}

void check_lobe(const std::vector<double>& x, double c, double eps, const Mollifier& rho) {
    if (x.empty() || c < x.front() || c > x.back()) return;
    double half = 0.5 * eps * rho.lobe_width();
    auto lo = std::lower_bound(x.begin(), x.end(), c - half), hi = std::upper_bound(x.begin(), x.end(), c + half);
    if (hi - lo < 8) throw Unresolved("eps under-resolved: fewer than 8 points across the central lobe");
}

NodeValue eval_mollified(const Node& n, const std::vector<double>& x, double eps, int order,
                         const EvalConfig& cfg) {
    const Mollifier& rho = *n.rho;
    NodeValue v = zeros(x.size(), order);
    if (auto* d = std::get_if<DeltaDerivative>(&n.dist)) {
        check_lobe(x, d->center, eps, rho);
        int k = d->k;
        if (order + k > kJetCapacity) throw DepthExceeded("derivative order beyond jet capacity");
        v.log_scale = -std::log(eps);
        for (std::size_t i = 0; i < x.size(); ++i) {
            Jet r = rho.jet((x[i] - d->center) / eps, order + k);
            Jet& o = v.jets[i];
            double s = std::pow(eps, -k);
            for (int m = 0; m <= order; ++m) {
                o[m] = r[k + m] * factorial(k + m) / factorial(m) * s;
                s /= eps;
            }
        }
    } else if (auto* h = std::get_if<Heaviside>(&n.dist)) {
        check_lobe(x, h->center, eps, rho);
        for (std::size_t i = 0; i < x.size(); ++i) {
            double u = (x[i] - h->center) / eps;
            Jet& o = v.jets[i];
            o[0] = rho.cumulative(u);
            if (order == 0) continue;
            Jet r = rho.jet(u, order - 1);
            double s = 1.0;
            for (int m = 1; m <= order; ++m) {
                s /= eps;
                o[m] = r[m - 1] / m * s;
            }
        }
    } else if (auto* p = std::get_if<PolynomialDist>(&n.dist)) {
        defect_jets(SmoothFn::polynomial(p->coeffs), rho, x, eps, order, v.jets, true);
    } else if (auto* s = std::get_if<SmoothOM>(&n.dist)) {
        defect_jets(s->f, rho, x, eps, order, v.jets, true);
    } else {
        v = detail::sampled_l2_value(std::get<SampledL2>(n.dist), rho, x, eps, order, cfg);
    }
    return v;
}

} // namespace

namespace detail {

NodeValue eval_node(const Node& n, const std::vector<double>& x, double eps, int order, const EvalConfig& cfg) {
    if (order > kJetCapacity) throw DepthExceeded("derivative order beyond jet capacity");
    switch (n.kind) {
    case NodeKind::embed: {
        NodeValue v = zeros(x.size(), order);
        for (std::size_t i = 0; i < x.size(); ++i) v.jets[i] = n.fn.jet(x[i], order, eps);
        return v;
    }
    case NodeKind::mollified: return eval_mollified(n, x, eps, order, cfg);
    case NodeKind::defect: {
        NodeValue v = zeros(x.size(), order);
        defect_jets(n.fn, *n.rho, x, eps, order, v.jets, false);
        return v;
    }
    case NodeKind::add: {
        NodeValue a = eval_node(n.lhs.node(), x, eps, order, cfg), b = eval_node(n.rhs.node(), x, eps, order, cfg);
        double s = std::max(a.log_scale, b.log_scale);
        double fa = std::exp(a.log_scale - s), fb = std::exp(b.log_scale - s);
        for (std::size_t i = 0; i < x.size(); ++i) a.jets[i] = fa * a.jets[i] + fb * b.jets[i];
        a.log_scale = s;
        return a;
    }
    case NodeKind::mul: {
        NodeValue a = eval_node(n.lhs.node(), x, eps, order, cfg), b = eval_node(n.rhs.node(), x, eps, order, cfg);
        for (std::size_t i = 0; i < x.size(); ++i) a.jets[i] = a.jets[i] * b.jets[i];
        a.log_scale += b.log_scale;
        return a;
    }
    case NodeKind::scale: {
        double lc = n.c.log_abs(eps);
        if (!(lc > -kInf)) return zeros(x.size(), order);
        if (!std::isfinite(lc)) throw InvalidArgument("scalar net not finite at eps = " + format_number(eps));
        NodeValue a = eval_node(n.lhs.node(), x, eps, order, cfg);
        a.log_scale += lc;
        if (n.c.sign() < 0)
            for (auto& j : a.jets) j *= -1.0;
        return a;
    }
    case NodeKind::derive: {
        NodeValue a = eval_node(n.lhs.node(), x, eps, order + n.order, cfg);
        for (auto& j : a.jets) j = differentiate(j, n.order);
        return a;
    }
    case NodeKind::drift: {
        double d = n.drift.at(eps);
        Interval s;
        if (support_of(n.lhs.node(), eps, s)) {
            if (std::max(std::abs(s.lo + d), std::abs(s.hi + d)) >= cfg.R)
                throw InvalidArgument("drifted support leaves [-R, R]; increase the radius beyond drift plus support");
        } else if (std::abs(d) >= cfg.R) {
            throw InvalidArgument("drift exceeds the truncation radius");
        }
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - d;
        return eval_node(n.lhs.node(), y, eps, order, cfg);
    }
    case NodeKind::restrict: return eval_node(n.lhs.node(), x, eps, order, cfg);
    case NodeKind::fourier:
    case NodeKind::inv_fourier: return fourier_node_value(n, x, eps, order, cfg);
    }
    throw Error("unknown node kind");
}

} // namespace detail

Interval net_domain(const NetExpr& e, double eps, const EvalConfig& cfg) {
    Interval d = domain_of(e.node(), eps);
    d = {std::max(d.lo, -cfg.R), std::min(d.hi, cfg.R)};
    if (!(d.lo < d.hi)) throw InvalidArgument("evaluation domain is empty");
    return d;
}

namespace {

SampledFunction to_sampled(const NodeValue& v, const std::vector<double>& x, int max_order, Interval dom,
                           const EvalConfig& cfg) {
    SampledFunction f;
    f.x = x;
    f.rows.assign(std::size_t(max_order + 1), std::vector<double>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (int k = 0; k <= max_order; ++k) f.rows[std::size_t(k)][i] = v.jets[i].derivative(k);
    f.log_scale = v.log_scale;
    f.lo = dom.lo;
    f.hi = dom.hi;
    f.restricted = dom.lo > -cfg.R || dom.hi < cfg.R;
    f.radius = cfg.R;
    return f;
}

void check_eps(double eps, int max_order) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps outside (0,1]");
    if (max_order < 0 || max_order > kJetCapacity) throw DepthExceeded("derivative order beyond jet capacity");
}

} // namespace

SampledFunction eval_net(const NetExpr& e, double eps, const EvalConfig& cfg, int max_order) {
    check_eps(eps, max_order);
    cfg.validate();
    Interval dom = net_domain(e, eps, cfg);
    std::vector<Patch> patches;
    collect_patches(e.node(), eps, 0.0, cfg, patches);
    auto x = composite_points(cfg, patches, dom.lo, dom.hi);
    auto v = detail::eval_node(e.node(), x, eps, max_order, cfg);
    return to_sampled(v, x, max_order, dom, cfg);
}

SampledFunction eval_net_at(const NetExpr& e, double eps, const std::vector<double>& points, const EvalConfig& cfg,
                            int max_order) {
    check_eps(eps, max_order);
    if (points.empty()) throw InvalidArgument("no evaluation points");
    auto v = detail::eval_node(e.node(), points, eps, max_order, cfg);
    return to_sampled(v, points, max_order, {points.front(), points.back()}, cfg);
}

unsigned worker_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* s = std::getenv("GTAU_THREADS");
    if (!s || !*s) return hw;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 0) return hw;
    return v == 0 ? hw : unsigned(v);
}

SweepResult sweep_specs(const NetExpr& e, const std::vector<SeminormSpec>& specs, const EpsilonGrid& grid,
                        const EvalConfig& cfg) {
    int order = 0;
    for (const auto& s : specs) order = std::max(order, s.order());
    const std::size_t n = grid.size();
    std::vector<std::vector<double>> logs(specs.size(), std::vector<double>(n));
    std::vector<std::vector<char>> trunc(specs.size(), std::vector<char>(n, 0));
    detail::parallel_for(n, [&](std::size_t i) {
        SampledFunction f = eval_net(e, grid.values[i], cfg, order);
        for (std::size_t s = 0; s < specs.size(); ++s) {
            SeminormValue v = seminorm(f, specs[s]);
            logs[s][i] = v.log_value;
            trunc[s][i] = v.truncated;
        }
    });
    SweepResult r;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        r.samples.emplace_back(grid.values, logs[s]);
        r.truncated.push_back(std::find(trunc[s].begin(), trunc[s].end(), 1) != trunc[s].end());
    }
    return r;
}

SweepResult sweep_specs(const SampledNet& net, const std::vector<SeminormSpec>& specs) {
    const std::size_t n = net.grid.size();
    if (net.slices.size() != n) throw InvalidArgument("slice count does not match the grid");
    SweepResult r;
    for (const auto& spec : specs) {
        std::vector<double> l(n);
        bool tr = false;
        for (std::size_t i = 0; i < n; ++i) {
            SeminormValue v = seminorm(net.slices[i], spec);
            l[i] = v.log_value;
            tr = tr || v.truncated;
        }
        r.samples.emplace_back(net.grid.values, std::move(l));
        r.truncated.push_back(tr);
    }
    return r;
}

ScalarNetSamples seminorm_sweep(const NetExpr& e, const SeminormSpec& spec, const EpsilonGrid& grid,
                                const EvalConfig& cfg) {
    return sweep_specs(e, {spec}, grid, cfg).samples.front();
}

} // namespace gtau
