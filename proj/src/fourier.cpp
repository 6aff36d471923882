#include "gtau/fourier.hpp"

#include "gtau/error.hpp"
#include "net_internal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace gtau {

using detail::NodeValue;

std::vector<double> SpectralGrid::x_nodes() const {
    std::vector<double> v(N);
    for (std::size_t j = 0; j < N; ++j) v[j] = x(j);
    return v;
}

std::vector<double> SpectralGrid::xi_nodes() const {
    std::vector<double> v(N);
    for (std::size_t k = 0; k < N; ++k) v[k] = xi(k);
    return v;
}

SpectralGrid spectral_grid(const EvalConfig& cfg) {
    cfg.validate();
    SpectralGrid g;
    g.N = cfg.N;
    g.R = cfg.R;
    g.h = cfg.h();
    g.dxi = 2.0 * M_PI / (double(cfg.N) * g.h);
    return g;
}

EvalConfig fourier_config() {
    EvalConfig c;
    c.N = std::size_t(1) << 17;
    return c;
}

EpsilonGrid fourier_grid() { return make_epsilon_grid(2.0, 1, 6); }

namespace {

std::mutex plan_mutex;

void fft(std::vector<Complex>& a, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        auto key = std::make_pair(a.size(), sign);
        auto it = plans.find(key);
        if (it == plans.end()) {
            std::vector<Complex> scratch(a.size());
            auto* z = reinterpret_cast<fftw_complex*>(scratch.data());
            p = fftw_plan_dft_1d(int(a.size()), z, z, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
            plans.emplace(key, p);
        } else {
            p = it->second;
        }
    }
    auto* z = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(p, z, z);
}

} // namespace

// F_k = h (-1)^k DFT((-1)^j f_j), the phase e^{i xi R} being (-1)^k on this grid
std::vector<Complex> forward_transform(const std::vector<Complex>& f, const SpectralGrid& g) {
    if (f.size() != g.N) throw InvalidArgument("sample count does not match the spectral grid");
    std::vector<Complex> a(f);
    for (std::size_t j = 1; j < g.N; j += 2) a[j] = -a[j];
    fft(a, FFTW_FORWARD);
    for (std::size_t k = 0; k < g.N; ++k) a[k] *= (k & 1) ? -g.h : g.h;
    return a;
}

std::vector<Complex> inverse_transform(const std::vector<Complex>& F, const SpectralGrid& g) {
    if (F.size() != g.N) throw InvalidArgument("sample count does not match the spectral grid");
    std::vector<Complex> a(F);
    for (std::size_t k = 1; k < g.N; k += 2) a[k] = -a[k];
    fft(a, FFTW_BACKWARD);
    double s = 1.0 / (double(g.N) * g.h);
    for (std::size_t j = 0; j < g.N; ++j) a[j] *= (j & 1) ? -s : s;
    return a;
}

std::vector<Complex> spectral_xi_derivative(const std::vector<Complex>& F, const SpectralGrid& g) {
    auto f = inverse_transform(F, g);
    for (std::size_t j = 0; j < g.N; ++j) f[j] *= Complex(0.0, -g.x(j));
    return forward_transform(f, g);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CJet {
    Jet re, im;
};

CJet operator*(Complex c, const CJet& a) {
    return {c.real() * a.re - c.imag() * a.im, c.real() * a.im + c.imag() * a.re};
}

Jet step_jet(const Mollifier& rho, double u, double eps, int order) {
    Jet o = Jet::constant(rho.cumulative(u), order);
    if (order == 0) return o;
    Jet r = rho.jet(u, order - 1);
    double s = 1.0;
    for (int m = 1; m <= order; ++m) {
        s /= eps;
        o[m] = r[m - 1] / m * s;
    }
    return o;
}

// inverse transform of the closed-form parts, real part
Jet reference_jet(const std::vector<DeltaTerm>& deltas, const std::vector<PvTerm>& pv, double x, double eps,
                  int order) {
    Jet X = Jet::variable(x, order);
    Jet acc = Jet::constant(0.0, order);
    for (const auto& d : deltas) {
        Jet s, c;
        sincos(d.center * X, s, c);
        Jet p = ipow(X, d.k);
        Complex ph = std::pow(Complex(0.0, -1.0), d.k) * d.coeff / (2.0 * M_PI);
        acc += (ph * CJet{p * c, p * s}).re;
    }
    for (const auto& t : pv) {
        Jet v;
        if (t.profile == PvTerm::mollified_step) {
            v = step_jet(*t.rho, (x - t.center) / eps, eps, order);
            v[0] -= 0.5;
        } else {
            v = erf(X + Jet::constant(-t.center, order));
        }
        acc += t.coeff.real() * v;
    }
    return acc;
}

Complex pv_value(const PvTerm& t, double xi, double eps) {
    if (xi == 0.0) return 0.0;
    double w = t.profile == PvTerm::mollified_step ? t.rho->spectrum(eps * xi) : 2.0 * std::exp(-xi * xi / 4.0);
    if (w == 0.0) return 0.0;
    return t.coeff * std::polar(1.0, -xi * t.center) * w / Complex(0.0, xi);
}

struct Singular {
    std::vector<DeltaTerm> deltas;
    std::vector<PvTerm> pv;
    double log_scale = 0.0;
    bool empty() const { return deltas.empty() && pv.empty(); }
};

void rescale(Singular& s, double factor) {
    for (auto& d : s.deltas) d.coeff *= factor;
    for (auto& p : s.pv) p.coeff *= factor;
}

Singular from_poly(const std::vector<double>& c, double factor = 1.0) {
    Singular s;
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0.0)
            s.deltas.push_back({int(k), 0.0, 2.0 * M_PI * std::pow(Complex(0.0, 1.0), int(k)) * c[k] * factor});
    return s;
}

bool as_poly(const Singular& s, std::vector<double>& c) {
    c.clear();
    for (const auto& d : s.deltas) {
        if (d.center != 0.0) return false;
        if (c.size() <= std::size_t(d.k)) c.resize(std::size_t(d.k) + 1, 0.0);
        c[std::size_t(d.k)] += (d.coeff / (2.0 * M_PI * std::pow(Complex(0.0, 1.0), d.k))).real();
    }
    return s.pv.empty();
}

Singular from_trig(const SmoothFn& f, double eps, double factor) {
    Singular s;
    double w = f.frequency(eps);
    if (f.kind == SmoothKind::sine) {
        s.deltas.push_back({0, w, Complex(0.0, -M_PI) * factor});
        s.deltas.push_back({0, -w, Complex(0.0, M_PI) * factor});
    } else {
        s.deltas.push_back({0, w, M_PI * factor});
        s.deltas.push_back({0, -w, M_PI * factor});
    }
    return s;
}

Singular smooth_singular(const SmoothFn& f, double eps, double factor) {
    switch (f.kind) {
    case SmoothKind::polynomial: return from_poly(f.poly, factor);
    case SmoothKind::sine:
    case SmoothKind::cosine: return from_trig(f, eps, factor);
    case SmoothKind::erf_step: {
        Singular s;
        s.pv.push_back({PvTerm::erf_step, factor, 0.0, nullptr});
        return s;
    }
    default: return {};
    }
}

Singular merge(Singular a, Singular b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    double L = std::max(a.log_scale, b.log_scale);
    rescale(a, std::exp(a.log_scale - L));
    rescale(b, std::exp(b.log_scale - L));
    a.deltas.insert(a.deltas.end(), b.deltas.begin(), b.deltas.end());
    a.pv.insert(a.pv.end(), b.pv.begin(), b.pv.end());
    a.log_scale = L;
    return a;
}

// closed-form transform of the non-decaying part of a slice
Singular singular_of(const Node& n, double eps) {
    switch (n.kind) {
    case NodeKind::embed: return smooth_singular(n.fn, eps, 1.0);
    case NodeKind::mollified: {
        if (auto* p = std::get_if<PolynomialDist>(&n.dist)) return from_poly(p->coeffs);
        if (auto* h = std::get_if<Heaviside>(&n.dist)) {
            Singular s;
            s.deltas.push_back({0, 0.0, M_PI});
            s.pv.push_back({PvTerm::mollified_step, 1.0, h->center, n.rho});
            return s;
        }
        if (auto* f = std::get_if<SmoothOM>(&n.dist)) {
            double damp = 1.0;
            if (f->f.kind == SmoothKind::sine || f->f.kind == SmoothKind::cosine)
                damp = n.rho->spectrum(eps * f->f.frequency(eps));
            return smooth_singular(f->f, eps, damp);
        }
        return {};
    }
    case NodeKind::defect:
        if (n.fn.kind == SmoothKind::sine || n.fn.kind == SmoothKind::cosine)
            return from_trig(n.fn, eps, n.rho->spectrum(eps * n.fn.frequency(eps)) - 1.0);
        return {};
    case NodeKind::add: return merge(singular_of(n.lhs.node(), eps), singular_of(n.rhs.node(), eps));
    case NodeKind::scale: {
        Singular s = singular_of(n.lhs.node(), eps);
        if (s.empty()) return s;
        double lc = n.c.log_abs(eps);
        if (!(lc > -kInf)) return {};
        s.log_scale += lc;
        if (n.c.sign() < 0) rescale(s, -1.0);
        return s;
    }
    case NodeKind::derive: {
        Singular s = singular_of(n.lhs.node(), eps), out;
        out.log_scale = s.log_scale;
        int k = n.order;
        // (i xi)^k delta^(j)(xi - c); the step parts differentiate into decaying terms
        for (const auto& d : s.deltas) {
            if (d.center == 0.0) {
                if (d.k < k) continue;
                double f = std::pow(-1.0, k) * factorial(d.k) / factorial(d.k - k);
                out.deltas.push_back({d.k - k, 0.0, d.coeff * std::pow(Complex(0.0, 1.0), k) * f});
            } else if (d.k == 0) {
                out.deltas.push_back({0, d.center, d.coeff * std::pow(Complex(0.0, d.center), k)});
            } else {
                throw Unsupported("derivative of a shifted delta derivative in the spectrum");
            }
        }
        return out;
    }
    case NodeKind::mul: {
        Singular a = singular_of(n.lhs.node(), eps), b = singular_of(n.rhs.node(), eps);
        if (a.empty() || b.empty()) return {};
        std::vector<double> pa, pb;
        if (!as_poly(a, pa) || !as_poly(b, pb))
            throw Unsupported("product of two non-decaying slices has no closed-form transform here");
        Singular s = from_poly(product(SmoothFn::polynomial(pa), SmoothFn::polynomial(pb)).poly);
        s.log_scale = a.log_scale + b.log_scale;
        return s;
    }
    case NodeKind::drift: {
        Singular s = singular_of(n.lhs.node(), eps);
        double d = n.drift.at(eps);
        std::vector<double> p;
        Singular shifted;
        shifted.log_scale = s.log_scale;
        Singular polys;
        for (const auto& t : s.deltas) {
            if (t.center == 0.0 && t.k > 0) polys.deltas.push_back(t);
            else if (t.k == 0) shifted.deltas.push_back({0, t.center, t.coeff * std::polar(1.0, -t.center * d)});
            else throw Unsupported("drift of a shifted delta derivative in the spectrum");
        }
        if (!polys.deltas.empty()) {
            as_poly(polys, p);
            // p(x - d) by repeated synthetic division
            std::vector<double> q(p.size(), 0.0);
            for (std::size_t k = 0; k < p.size(); ++k)
                for (std::size_t j = 0; j <= k; ++j)
                    q[j] += p[k] * std::tgamma(double(k + 1)) / (std::tgamma(double(j + 1)) * std::tgamma(double(k - j + 1))) *
                            std::pow(-d, double(k - j));
            for (auto& t : from_poly(q).deltas) shifted.deltas.push_back(t);
        }
        for (auto t : s.pv) {
            t.center += d;
            shifted.pv.push_back(t);
        }
        return shifted;
    }
    case NodeKind::restrict: throw Unsupported("Fourier transform of a restricted net");
    default: return {};
    }
}

double sup_abs(const std::vector<Complex>& v, std::size_t lo, std::size_t hi) {
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

struct Remainder {
    std::vector<Complex> values;
    Singular singular;
    double log_scale;
};

Remainder decaying_remainder(const NetExpr& e, double eps, const EvalConfig& cfg, const SpectralGrid& g) {
    Interval dom = net_domain(e, eps, cfg);
    if (dom.lo > -cfg.R || dom.hi < cfg.R) throw Unsupported("Fourier transform of a restricted net");
    auto x = g.x_nodes();
    NodeValue v = detail::eval_node(e.node(), x, eps, 0, cfg);
    Singular s = singular_of(e.node(), eps);
    double L = s.empty() ? v.log_scale : std::max(v.log_scale, s.log_scale);
    double fv = std::exp(v.log_scale - L);
    if (!s.empty()) rescale(s, std::exp(s.log_scale - L));
    s.log_scale = L;
    Remainder r{std::vector<Complex>(g.N), s, L};
    for (std::size_t j = 0; j < g.N; ++j) {
        double ref = s.empty() ? 0.0 : reference_jet(s.deltas, s.pv, x[j], eps, 0).value();
        r.values[j] = fv * v.jets[j].value() - ref;
    }
    std::size_t edge = std::max<std::size_t>(g.N / 100, 1);
    double inner = sup_abs(r.values, 0, g.N);
    double tail = std::max(sup_abs(r.values, 0, edge), sup_abs(r.values, g.N - edge, g.N));
    if (tail > 1e-10 * inner)
        throw Unresolved("slice does not decay within [-R, R] and has no closed-form singular part");
    return r;
}

void check_band(const std::vector<Complex>& F, const SpectralGrid& g) {
    std::size_t band = g.N / 20;
    double inner = sup_abs(F, 0, g.N);
    double top = std::max(sup_abs(F, 0, band), sup_abs(F, g.N - band, g.N));
    if (top > 1e-10 * inner) throw Unresolved("slice spectrum reaches the Nyquist band; eps under-resolved");
}

} // namespace

SpectralSlice fourier_slice(const NetExpr& e, double eps, const EvalConfig& cfg) {
    SpectralGrid g = spectral_grid(cfg);
    Remainder r = decaying_remainder(e, eps, cfg, g);
    SpectralSlice s;
    s.eps = eps;
    s.regular = forward_transform(r.values, g);
    check_band(s.regular, g);
    s.deltas = std::move(r.singular.deltas);
    s.pv = std::move(r.singular.pv);
    s.log_scale = r.log_scale;
    return s;
}

namespace {

std::shared_ptr<const Mollifier> find_rho(const Node& n) {
    if (n.rho) return n.rho;
    if (!n.lhs.empty())
        if (auto r = find_rho(n.lhs.node())) return r;
    if (!n.rhs.empty()) return find_rho(n.rhs.node());
    return nullptr;
}

} // namespace

RapidDistNet fourier_net(const NetExpr& e, const EpsilonGrid& grid, const EvalConfig& cfg) {
    RapidDistNet T;
    T.grid = grid;
    T.spec = spectral_grid(cfg);
    T.rho = find_rho(e.node());
    T.provenance = "fourier(" + e.to_string() + ")";
    T.slices.resize(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) { T.slices[i] = fourier_slice(e, grid.values[i], cfg); });
    return T;
}

Complex RapidDistNet::value(std::size_t i, std::size_t k) const {
    const SpectralSlice& s = slices[i];
    Complex v = s.regular[k];
    double xi = spec.xi(k);
    for (const auto& t : s.pv) v += pv_value(t, xi, s.eps);
    return v * std::exp(s.log_scale);
}

std::vector<Complex> RapidDistNet::sampled(std::size_t i) const {
    std::vector<Complex> v(spec.N);
    for (std::size_t k = 0; k < spec.N; ++k) v[k] = value(i, k);
    for (const auto& d : slices[i].deltas) {
        if (d.k != 0) continue;
        long k = std::lround(d.center / spec.dxi) + long(spec.N / 2);
        if (k >= 0 && k < long(spec.N)) v[std::size_t(k)] += d.coeff / spec.dxi * std::exp(slices[i].log_scale);
    }
    return v;
}

RapidDistNet RapidDistNet::scaled(const GeneralizedConstant& c) const {
    RapidDistNet r = *this;
    for (auto& s : r.slices) {
        s.log_scale += c.log_abs(s.eps);
        if (c.sign() < 0) {
            for (auto& v : s.regular) v = -v;
            for (auto& d : s.deltas) d.coeff = -d.coeff;
            for (auto& p : s.pv) p.coeff = -p.coeff;
        }
    }
    r.provenance = "scale(" + c.to_string() + "," + provenance + ")";
    return r;
}

SampledNet inv_fourier_net(const RapidDistNet& T, int max_order) {
    if (max_order < 0 || max_order > kJetCapacity) throw DepthExceeded("derivative order beyond jet capacity");
    const SpectralGrid& g = T.spec;
    SampledNet out;
    out.grid = T.grid;
    out.slices.resize(T.slices.size());
    auto x = g.x_nodes();
    detail::parallel_for(T.slices.size(), [&](std::size_t i) {
        const SpectralSlice& s = T.slices[i];
        SampledFunction f;
        f.x = x;
        f.rows.assign(std::size_t(max_order + 1), std::vector<double>(g.N, 0.0));
        for (int m = 0; m <= max_order; ++m) {
            std::vector<Complex> G(s.regular);
            for (std::size_t k = 0; k < g.N; ++k) G[k] *= std::pow(Complex(0.0, g.xi(k)), m);
            if (m % 2 == 1) G[0] = 0.0;
            auto v = inverse_transform(G, g);
            for (std::size_t j = 0; j < g.N; ++j) f.rows[std::size_t(m)][j] = v[j].real();
        }
        if (!s.deltas.empty() || !s.pv.empty())
            for (std::size_t j = 0; j < g.N; ++j) {
                Jet r = reference_jet(s.deltas, s.pv, x[j], s.eps, max_order);
                for (int m = 0; m <= max_order; ++m) f.rows[std::size_t(m)][j] += r.derivative(m);
            }
        f.log_scale = s.log_scale;
        f.lo = x.front();
        f.hi = x.back();
        f.radius = g.R;
        out.slices[i] = std::move(f);
    });
    return out;
}

RapidDistNet classical_fourier_tau(const NetExpr& e, std::shared_ptr<const Mollifier> rho, const EpsilonGrid& grid,
                                   const EvalConfig& cfg) {
    if (!rho) throw InvalidArgument("classical transform needs a mollifier");
    RapidDistNet T;
    T.grid = grid;
    T.spec = spectral_grid(cfg);
    T.rho = rho;
    T.provenance = "classical(" + e.to_string() + ")";
    T.slices.resize(grid.size());
    const SpectralGrid& g = T.spec;
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        double eps = grid.values[i];
        Remainder r = decaying_remainder(e, eps, cfg, g);
        auto x = g.x_nodes();
        if (!r.singular.pv.empty()) {
            // the cutoff itself must fit in the window for the step parts
            if ((rho->center_frequency() + rho->glue_width()) / eps >= cfg.R)
                throw Unsupported("cutoff transform of a step slice needs R beyond the cutoff support");
            for (std::size_t j = 0; j < g.N; ++j)
                r.values[j] += reference_jet({}, r.singular.pv, x[j], eps, 0).value();
        }
        for (std::size_t j = 0; j < g.N; ++j) r.values[j] *= rho->spectrum(eps * x[j]);
        SpectralSlice s;
        s.eps = eps;
        s.regular = forward_transform(r.values, g);
        // F(u rho^(eps .)) = F(u) * rho_eps, closed form on the point masses
        for (const auto& d : r.singular.deltas)
            for (std::size_t k = 0; k < g.N; ++k) {
                double u = (g.xi(k) - d.center) / eps;
                Jet j = rho->jet(u, d.k);
                s.regular[k] += d.coeff * j.derivative(d.k) * std::pow(eps, -1.0 - d.k);
            }
        s.log_scale = r.log_scale;
        T.slices[i] = std::move(s);
    });
    return T;
}

RapidDistNet iota_OC(const DistributionDesc& Td, std::shared_ptr<const Mollifier> rho, const EpsilonGrid& grid,
                     const EvalConfig& cfg, Complex coeff) {
    if (!rho) throw InvalidArgument("iota_OC needs a mollifier");
    RapidDistNet T;
    T.grid = grid;
    T.spec = spectral_grid(cfg);
    T.rho = rho;
    T.provenance = "iota_OC(" + to_string(Td) + ")";
    const SpectralGrid& g = T.spec;
    for (double eps : grid.values) {
        SpectralSlice s;
        s.eps = eps;
        s.regular.assign(g.N, 0.0);
        if (auto* d = std::get_if<DeltaDerivative>(&Td)) {
            double flat = rho->center_frequency() - rho->glue_width();
            Complex c = coeff;
            if (std::abs(eps * d->center) > flat) {
                if (d->k != 0) throw Unsupported("delta derivative outside the flat band of the cutoff");
                c *= rho->spectrum(eps * d->center);
            }
            s.deltas.push_back({d->k, d->center, c});
        } else {
            if ((rho->center_frequency() + rho->glue_width()) / eps > g.nyquist())
                throw Unresolved("cutoff support exceeds the Nyquist frequency");
            auto* sl = std::get_if<SampledL2>(&Td);
            if (sl && sl->values.size() != g.N) throw InvalidArgument("sampled spectrum does not match the grid");
            for (std::size_t k = 0; k < g.N; ++k) {
                double xi = g.xi(k), w = rho->spectrum(eps * xi);
                if (w == 0.0) continue;
                double t;
                if (auto* h = std::get_if<Heaviside>(&Td)) t = xi > h->center ? 1.0 : xi == h->center ? 0.5 : 0.0;
                else if (auto* p = std::get_if<PolynomialDist>(&Td)) t = SmoothFn::polynomial(p->coeffs).jet(xi, 0, eps).value();
                else if (auto* f = std::get_if<SmoothOM>(&Td)) t = f->f.jet(xi, 0, eps).value();
                else t = sl->values[k];
                s.regular[k] = coeff * t * w;
            }
        }
        T.slices.push_back(std::move(s));
    }
    return T;
}

ClassificationReport is_rapidly_decreasing_gdist(const RapidDistNet& T, const std::vector<TestFunction>& library,
                                                 const ClassifyOptions& opt) {
    SampledNet inv = inv_fourier_net(T, opt.L);
    ClassificationReport r = is_moderate(inv, library, opt);
    r.notes.push_back("inverse transform of " + T.provenance);
    return r;
}

HsResult hs_type_test(const NetExpr& e, double s, const EpsilonGrid& grid, const EvalConfig& cfg,
                      const Thresholds& t) {
    RapidDistNet T = fourier_net(e, grid, cfg);
    HsResult r;
    std::vector<double> l(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const SpectralSlice& sl = T.slices[i];
        if (!sl.deltas.empty() || !sl.pv.empty()) {
            r.note = "slice has point masses or a 1/xi part, not square integrable";
            r.norms = ScalarNetSamples(grid.values, std::vector<double>(grid.size(), kInf));
            r.estimate.slope = -kInf;
            return r;
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < T.spec.N; ++k) {
            double xi = T.spec.xi(k);
            acc += std::pow(1.0 + xi * xi, s) * std::norm(sl.regular[k]);
        }
        acc *= T.spec.dxi;
        l[i] = acc > 0.0 ? 0.5 * std::log(acc) + sl.log_scale : -kInf;
    }
    r.norms = ScalarNetSamples(grid.values, l);
    r.estimate = estimate_order(r.norms);
    r.hs_type = classify_estimate(r.estimate, t).moderate();
    return r;
}

ScalarNetSamples spectral_difference(const RapidDistNet& a, const RapidDistNet& b, double noise_floor) {
    if (a.slices.size() != b.slices.size() || a.spec.N != b.spec.N)
        throw InvalidArgument("spectral nets on different grids");
    std::vector<double> l(a.slices.size());
    for (std::size_t i = 0; i < a.slices.size(); ++i) {
        const SpectralSlice &A = a.slices[i], &B = b.slices[i];
        double L = std::max(A.log_scale, B.log_scale);
        double fa = std::exp(A.log_scale - L), fb = std::exp(B.log_scale - L);
        double diff = 0.0, size = 0.0;
        for (std::size_t k = 0; k < a.spec.N; ++k) {
            double xi = a.spec.xi(k);
            Complex va = A.regular[k], vb = B.regular[k];
            for (const auto& t : A.pv) va += pv_value(t, xi, A.eps);
            for (const auto& t : B.pv) vb += pv_value(t, xi, B.eps);
            va *= fa;
            vb *= fb;
            diff = std::max(diff, std::abs(va - vb));
            size = std::max({size, std::abs(va), std::abs(vb)});
        }
        // point masses compare by coefficient
        std::map<std::pair<int, double>, Complex> mass;
        for (const auto& d : A.deltas) mass[{d.k, d.center}] += fa * d.coeff;
        for (const auto& d : B.deltas) mass[{d.k, d.center}] -= fb * d.coeff;
        for (const auto& [key, c] : mass) diff = std::max(diff, std::abs(c));
        for (const auto& d : A.deltas) size = std::max(size, fa * std::abs(d.coeff));
        for (const auto& d : B.deltas) size = std::max(size, fb * std::abs(d.coeff));
        l[i] = diff <= noise_floor * size || diff == 0.0 ? -kInf : std::log(diff) + L;
    }
    return ScalarNetSamples(a.grid.values, l);
}

std::vector<double> round_trip_residual(const NetExpr& e, const EpsilonGrid& grid, const EvalConfig& cfg) {
    RapidDistNet T = fourier_net(e, grid, cfg);
    SampledNet back = inv_fourier_net(T, 0);
    auto x = T.spec.x_nodes();
    std::vector<double> res(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        NodeValue v = detail::eval_node(e.node(), x, grid.values[i], 0, cfg);
        double L = back.slices[i].log_scale, fv = std::exp(v.log_scale - L), m = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            m = std::max(m, std::abs(back.slices[i].rows[0][j] - fv * v.jets[j].value()));
        res[i] = m * std::exp(L);
    }
    return res;
}

// ---- hooks for the net evaluator ----

namespace detail {

NodeValue fourier_node_value(const Node& n, const std::vector<double>& xi, double eps, int order,
                             const EvalConfig& cfg) {
    const bool inverse = n.kind == NodeKind::inv_fourier;
    SampledFunction f = eval_net(n.lhs, eps, cfg, 0);
    if (f.restricted) throw Unsupported("Fourier transform of a restricted net");
    auto w = trapezoid_weights(f.x);
    const std::size_t nx = f.x.size();
    const double sgn = inverse ? 1.0 : -1.0, pre = inverse ? 1.0 / (2.0 * M_PI) : 1.0;
    // g_m = w f (sgn i x)^m
    std::vector<std::vector<Complex>> gm(std::size_t(order + 1), std::vector<Complex>(nx));
    for (std::size_t i = 0; i < nx; ++i) {
        Complex p = pre * w[i] * f.rows[0][i], ix(0.0, sgn * f.x[i]);
        for (int m = 0; m <= order; ++m) {
            gm[std::size_t(m)][i] = p;
            p *= ix;
        }
    }
    NodeValue out{std::vector<Jet>(xi.size(), Jet::constant(0.0, order)), f.log_scale};
    std::vector<Complex> ph(nx), rot(nx);
    double step = std::numeric_limits<double>::quiet_NaN();
    double re_max = 0.0, im_max = 0.0;
    for (std::size_t p = 0; p < xi.size(); ++p) {
        if (p % 64 == 0) {
            for (std::size_t i = 0; i < nx; ++i) ph[i] = std::polar(1.0, sgn * xi[p] * f.x[i]);
        } else {
            double st = xi[p] - xi[p - 1];
            if (st != step) {
                for (std::size_t i = 0; i < nx; ++i) rot[i] = std::polar(1.0, sgn * st * f.x[i]);
                step = st;
            }
            for (std::size_t i = 0; i < nx; ++i) ph[i] *= rot[i];
        }
        for (int m = 0; m <= order; ++m) {
            Complex acc = 0.0;
            const auto& g = gm[std::size_t(m)];
            for (std::size_t i = 0; i < nx; ++i) acc += g[i] * ph[i];
            out.jets[p][m] = acc.real() / factorial(m);
            if (m == 0) {
                re_max = std::max(re_max, std::abs(acc.real()));
                im_max = std::max(im_max, std::abs(acc.imag()));
            }
        }
    }
    if (im_max > 1e-9 * re_max + 1e-300)
        throw Unsupported("transform of this slice is not real; use the fourier subcommand for complex spectra");
    return out;
}

NodeValue sampled_l2_value(const SampledL2& d, const Mollifier& rho, const std::vector<double>& x, double eps,
                           int order, const EvalConfig& cfg) {
    SpectralGrid g = spectral_grid(cfg);
    if (d.values.size() != g.N || d.R != cfg.R)
        throw InvalidArgument("sampled distribution does not live on the evaluation grid");
    if (eps * rho.lobe_width() / g.h < 8.0)
        throw Unresolved("eps under-resolved: fewer than 8 points across the central lobe");
    std::vector<Complex> F(d.values.begin(), d.values.end());
    F = forward_transform(F, g);
    for (std::size_t k = 0; k < g.N; ++k) F[k] *= rho.spectrum(eps * g.xi(k));
    std::vector<std::vector<double>> rows(std::size_t(order + 1), std::vector<double>(g.N));
    auto smooth = inverse_transform(F, g);
    for (std::size_t j = 0; j < g.N; ++j) rows[0][j] = smooth[j].real();
    for (int m = 1; m <= order; ++m) {
        auto& r = rows[std::size_t(m)];
        const auto& p = rows[std::size_t(m - 1)];
        if (cfg.scheme == DerivativeScheme::finite_difference_4) {
            const std::size_t N = g.N;
            for (std::size_t j = 0; j < N; ++j)
                r[j] = (-p[(j + 2) % N] + 8.0 * p[(j + 1) % N] - 8.0 * p[(j + N - 1) % N] + p[(j + N - 2) % N]) /
                       (12.0 * g.h);
        } else {
            std::vector<Complex> G(F);
            for (std::size_t k = 0; k < g.N; ++k) G[k] *= std::pow(Complex(0.0, g.xi(k)), m);
            if (m % 2 == 1) G[0] = 0.0;
            auto v = inverse_transform(G, g);
            for (std::size_t j = 0; j < g.N; ++j) r[j] = v[j].real();
        }
    }
    NodeValue out{std::vector<Jet>(x.size(), Jet::constant(0.0, order)), 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = (x[i] + g.R) / g.h;
        double tr = std::round(t);
        for (int m = 0; m <= order; ++m) {
            const auto& r = rows[std::size_t(m)];
            double v;
            if (std::abs(t - tr) < 1e-9) {
                v = r[std::size_t(((long(tr) % long(g.N)) + long(g.N)) % long(g.N))];
            } else {
                // 8-point Lagrange, periodic
                long j0 = long(std::floor(t)) - 3;
                v = 0.0;
                for (int a = 0; a < 8; ++a) {
                    double L = 1.0;
                    for (int b = 0; b < 8; ++b)
                        if (b != a) L *= (t - double(j0 + b)) / double(a - b);
                    long jj = ((j0 + a) % long(g.N) + long(g.N)) % long(g.N);
                    v += L * r[std::size_t(jj)];
                }
            }
            out.jets[i][m] = v / factorial(m);
        }
    }
    return out;
}

} // namespace detail

} // namespace gtau
