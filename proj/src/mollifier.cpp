#include "gtau/mollifier.hpp"

#include "gtau/error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace gtau {

void EvalConfig::validate() const {
    if (!(R > 0.0)) throw InvalidArgument("truncation radius must be positive");
    if (N < 1024 || (N & (N - 1)) != 0) throw InvalidArgument("grid size must be a power of two >= 1024");
    if (patch_density < 4) throw InvalidArgument("patch density too small");
}

namespace {
using detail::gl;
using detail::integrate;
using detail::kGL;

double sinc_value(double t) {
    if (std::abs(t) < 1e-4) return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

constexpr int kChebNodes = 16;

// -zeta(2k) / (k pi^{2k}), k = 1..8
constexpr std::array<double, 8> kLogSincCoef = {
    -1.0 / 6.0,
    -1.0 / 90.0 / 2.0,
    -1.0 / 945.0 / 3.0,
    -1.0 / 9450.0 / 4.0,
    -1.0 / 93555.0 / 5.0,
    -691.0 / 638512875.0 / 6.0,
    -2.0 / 18243225.0 / 7.0,
    -3617.0 / 325641566250.0 / 8.0,
};

double cheb_node(int j) { return std::cos(M_PI * (j + 0.5) / kChebNodes); }

} // namespace

double Mollifier::Panels::eval(double t) const {
    int npan = int(values.size()) / nodes;
    int p = std::clamp(int((t - lo) / width), 0, npan - 1);
    double a = lo + p * width;
    double z = 2.0 * (t - a) / width - 1.0;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < nodes; ++j) {
        double d = z - cheb_node(j);
        double f = values[std::size_t(p * nodes + j)];
        if (d == 0.0) return f;
        // barycentric weights for first-kind nodes: (-1)^j sin(theta_j)
        double wj = ((j % 2) ? -1.0 : 1.0) * std::sin(M_PI * (j + 0.5) / nodes);
        num += wj * f / d;
        den += wj / d;
    }
    return num / den;
}

Mollifier::Mollifier(double inner, double outer, const EvalConfig& cfg)
    : inner_(inner), outer_(outer), cfg_(cfg) {
    cfg.validate();
    if (!(inner > 0.0) || !(outer > inner)) throw InvalidArgument("plateau needs 0 < inner < outer");
    double nyquist = M_PI / cfg.h();
    if (outer > 0.5 * nyquist) throw InvalidArgument("plateau too wide for the grid");

    a_ = 0.5 * (inner + outer);
    double S = 0.5 * (outer - inner);
    n_equal_ = 32;
    s_equal_ = 0.875 * S / n_equal_;
    glue_ = 0.875 * S;
    for (int j = 1; j <= 59; ++j) {
        tail_.push_back(0.125 * S * std::ldexp(1.0, -j));
        glue_ += tail_.back();
    }

    tail_power_sums_.assign(tail_.size() + 1, {});
    for (std::size_t J = tail_.size(); J-- > 0;) {
        double t2 = tail_[J] * tail_[J], p = 1.0;
        for (int k = 0; k < kLogSincTerms; ++k) {
            p *= t2;
            tail_power_sums_[J][std::size_t(k)] = tail_power_sums_[J + 1][std::size_t(k)] + p;
        }
    }

    // tail mass beyond U is below 1e-18 once (s u)^{-32} / (32 pi) is
    u_sat_ = std::pow(1.0 / (32.0 * M_PI * 1e-18), 1.0 / 32.0) / s_equal_;

    // glue cdf and density by Fourier inversion of mu^
    std::vector<double> qx, qw, qm;
    double xmax = 5.0 / s_equal_;
    double pw = 0.5 / S;
    int npan = int(std::ceil(xmax / pw));
    for (int p = 0; p < npan; ++p) {
        double lo = p * pw, m = lo + 0.5 * pw;
        for (int i = 0; i < kGL; ++i) {
            double x = m + 0.5 * pw * gl().x[i];
            qx.push_back(x);
            qw.push_back(0.5 * pw * gl().w[i]);
            qm.push_back(mu_hat(x));
        }
    }
    auto cdf_direct = [&](double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < qx.size(); ++i) s += qw[i] * std::sin(t * qx[i]) * qm[i] / qx[i];
        return 0.5 + s / M_PI;
    };
    auto density_direct = [&](double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < qx.size(); ++i) s += qw[i] * std::cos(t * qx[i]) * qm[i];
        return s / M_PI;
    };
    auto fill = [](Panels& P, double lo, double hi, int n, auto&& f) {
        P.lo = lo;
        P.hi = hi;
        P.nodes = kChebNodes;
        P.width = (hi - lo) / n;
        P.values.resize(std::size_t(n * kChebNodes));
        for (int p = 0; p < n; ++p)
            for (int j = 0; j < kChebNodes; ++j) {
                double t = lo + p * P.width + 0.5 * P.width * (cheb_node(j) + 1.0);
                P.values[std::size_t(p * kChebNodes + j)] = f(t);
            }
    };
    fill(cdf_, 0.0, glue_, 64, cdf_direct);
    fill(density_, 0.0, glue_, 64, density_direct);

    // cumulative integral of rho on [0, u_sat]
    int ncum = int(std::ceil(u_sat_ * outer_));
    cumulative_.lo = 0.0;
    cumulative_.hi = u_sat_;
    cumulative_.nodes = kChebNodes;
    cumulative_.width = u_sat_ / ncum;
    cumulative_.values.resize(std::size_t(ncum * kChebNodes));
    double start = 0.0, comp = 0.0;
    auto rho = [this](double u) { return value(u); };
    for (int p = 0; p < ncum; ++p) {
        double a = p * cumulative_.width;
        for (int j = 0; j < kChebNodes; ++j) {
            double t = a + 0.5 * cumulative_.width * (cheb_node(j) + 1.0);
            cumulative_.values[std::size_t(p * kChebNodes + j)] = start + integrate(rho, a, t);
        }
        double y = integrate(rho, a, a + cumulative_.width) - comp;
        double t = start + y;
        comp = (t - start) - y;
        start = t;
    }
    cumulative_error_ = start - 0.5;
    // pin int_0^U rho to 1/2 so the saturated branch joins continuously
    for (double& v : cumulative_.values) v *= 0.5 / start;

    // samples and moments on the symmetric build grid
    const std::size_t n = cfg.N;
    const double h = cfg.h();
    samples_.resize(n + 1);
    moments_.assign(kMaxMomentOrder + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        double x = -cfg.R + double(i) * h;
        double r = value(x);
        samples_[i] = r;
        double w = (i == 0 || i == n) ? 0.5 * h : h;
        double xp = 1.0;
        for (int k = 0; k <= kMaxMomentOrder; ++k) {
            moments_[std::size_t(k)] += w * xp * r;
            xp *= x;
        }
        decay_ = std::max(decay_, std::pow(1.0 + x * x, 3.0) * std::abs(r));
    }
    if (std::abs(moments_[0] - 1.0) <= kMassTolerance) {
        K_ = 0;
        while (K_ < kMaxMomentOrder && std::abs(moments_[std::size_t(K_ + 1)]) <= kMomentTolerance) ++K_;
    }
}

double Mollifier::mu_hat(double x) const {
    double e = sinc_value(s_equal_ * x);
    double e2 = e * e, e4 = e2 * e2, e8 = e4 * e4, e16 = e8 * e8;
    double r = e16 * e16;
    for (double t : tail_) {
        if (t * std::abs(x) < 3e-9) break;
        r *= sinc_value(t * x);
    }
    return r;
}

double Mollifier::value(double u) const { return a_ / M_PI * sinc_value(a_ * u) * mu_hat(u); }

Jet Mollifier::jet(double u, int order) const {
    // (a|u|)^{-1} (s|u|)^{-32} already below the smallest double
    double au = std::abs(u);
    if (s_equal_ * au > 1.0) {
        double lb = std::log(a_ / M_PI) - std::log(a_ * au) - 32.0 * std::log(s_equal_ * au) +
                    order * std::log(2.0 * outer_ + 1.0) + 10.0;
        if (lb < -745.0) return Jet::constant(0.0, order);
    }
    Jet U = Jet::variable(u, order);
    Jet r = sinc(a_ * U);
    r *= a_ / M_PI;
    // small arguments go through ln sinc(t) = -sum_k zeta(2k) t^{2k} / (k pi^{2k})
    std::array<double, kLogSincTerms> c{};
    bool use_series = false;
    if (s_equal_ * au < 0.25) {
        double s2 = s_equal_ * s_equal_, p = 1.0;
        for (int k = 0; k < kLogSincTerms; ++k) {
            p *= s2;
            c[std::size_t(k)] += n_equal_ * p;
        }
        use_series = true;
    } else {
        r = r * ipow(sinc(s_equal_ * U), n_equal_);
    }
    std::size_t J = 0;
    while (J < tail_.size() && tail_[J] * au > 0.25) {
        r = r * sinc(tail_[J] * U);
        ++J;
    }
    if (J < tail_.size()) {
        for (int k = 0; k < kLogSincTerms; ++k) c[std::size_t(k)] += tail_power_sums_[J][std::size_t(k)];
        use_series = true;
    }
    if (use_series) {
        Jet W = U * U;
        Jet L = Jet::constant(0.0, order);
        for (int k = kLogSincTerms; k-- > 0;) {
            L = L * W;
            L[0] += kLogSincCoef[std::size_t(k)] * c[std::size_t(k)];
        }
        L = L * W;
        r = r * exp(L);
    }
    return r;
}

double Mollifier::glue_cdf(double t) const {
    if (t >= glue_) return 1.0;
    if (t <= -glue_) return 0.0;
    if (t < 0) return 1.0 - cdf_.eval(-t);
    return cdf_.eval(t);
}

double Mollifier::glue_density(double t) const {
    if (std::abs(t) >= glue_) return 0.0;
    return density_.eval(std::abs(t));
}

double Mollifier::spectrum(double xi) const {
    double ax = std::abs(xi);
    if (ax <= a_ - glue_) return 1.0;
    if (ax >= a_ + glue_) return 0.0;
    return 1.0 - glue_cdf(ax - a_);
}

double Mollifier::spectrum_derivative(double xi) const {
    double ax = std::abs(xi);
    if (ax <= a_ - glue_ || ax >= a_ + glue_) return 0.0;
    double d = -glue_density(ax - a_);
    return xi < 0 ? -d : d;
}

double Mollifier::cumulative(double u) const {
    if (u >= u_sat_) return 1.0;
    if (u <= -u_sat_) return 0.0;
    double g = cumulative_.eval(std::abs(u));
    return u < 0 ? 0.5 - g : 0.5 + g;
}

double Mollifier::lobe_width() const { return 2.0 * M_PI / a_; }

Mollifier build_mollifier(double inner, double outer, const EvalConfig& cfg, int required_order) {
    if (required_order < 0 || required_order > kMaxMomentOrder)
        throw InvalidArgument("required moment order must lie in 0..12");
    Mollifier m(inner, outer, cfg);
    const auto& mom = m.moments();
    if (std::abs(mom[0] - 1.0) > kMassTolerance)
        throw MomentFailure(0, mom[0], "mollifier mass check failed at k = 0");
    for (int k = 1; k <= required_order; ++k)
        if (std::abs(mom[std::size_t(k)]) > kMomentTolerance)
            throw MomentFailure(k, mom[std::size_t(k)],
                                "mollifier moment check failed, first failing k = " + std::to_string(k));
    return m;
}

std::vector<double> check_moments(const Mollifier& rho, int k_max) {
    if (k_max < 0 || k_max > kMaxMomentOrder) throw InvalidArgument("k_max must lie in 0..12");
    return {rho.moments().begin(), rho.moments().begin() + k_max + 1};
}

std::vector<double> uniform_points(const EvalConfig& cfg) {
    std::vector<double> x(cfg.N + 1);
    for (std::size_t i = 0; i <= cfg.N; ++i) x[i] = -cfg.R + double(i) * cfg.h();
    x.back() = cfg.R;
    return x;
}

Patch mollifier_patch(const Mollifier& rho, double center, double eps, const EvalConfig& cfg) {
    double du = 0.5 * rho.lobe_width() / cfg.patch_density;
    return {center, eps * rho.saturation_radius(), eps * du};
}

std::vector<double> composite_points(const EvalConfig& cfg, std::vector<Patch> patches, double lo,
                                     double hi) {
    if (!(lo < hi)) throw InvalidArgument("empty evaluation interval");
    std::sort(patches.begin(), patches.end(), [](const Patch& p, const Patch& q) {
        return p.center - p.half_width < q.center - q.half_width;
    });
    struct Block {
        double a, b, anchor, step;
    };
    std::vector<Block> blocks;
    for (const auto& p : patches) {
        if (!(p.spacing > 0.0)) continue;
        double a = p.center - p.half_width, b = p.center + p.half_width;
        if (b < lo || a > hi) continue;
        if (!blocks.empty() && a <= blocks.back().b) {
            blocks.back().b = std::max(blocks.back().b, b);
            blocks.back().step = std::min(blocks.back().step, p.spacing);
        } else {
            blocks.push_back({a, b, p.center, p.spacing});
        }
    }
    std::vector<double> x;
    const double h = cfg.h();
    std::size_t bi = 0;
    for (std::size_t i = 0; i <= cfg.N; ++i) {
        double xi = i == cfg.N ? cfg.R : -cfg.R + double(i) * h;
        if (xi < lo || xi > hi) continue;
        while (bi < blocks.size() && blocks[bi].b < xi) ++bi;
        if (bi < blocks.size() && xi >= blocks[bi].a) continue;
        x.push_back(xi);
    }
    for (const auto& B : blocks) {
        double a = std::max(B.a, lo), b = std::min(B.b, hi);
        long k0 = long(std::ceil((a - B.anchor) / B.step)), k1 = long(std::floor((b - B.anchor) / B.step));
        for (long k = k0; k <= k1; ++k) x.push_back(B.anchor + double(k) * B.step);
    }
    x.push_back(lo);
    x.push_back(hi);
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end(), [](double p, double q) { return q - p < 1e-14 * (1.0 + std::abs(p)); }),
            x.end());
    return x;
}

SampledFunction scaled_mollifier(const Mollifier& rho, double eps, const std::vector<double>& points,
                                 int max_order) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps outside (0,1]");
    if (max_order < 0 || max_order > kJetCapacity) throw DepthExceeded("derivative order beyond jet capacity");
    double half = 0.5 * eps * rho.lobe_width();
    std::size_t across = 0;
    for (double x : points)
        if (std::abs(x) <= half) ++across;
    if (across < 8) throw Unresolved("eps under-resolved: fewer than 8 points across the central lobe");

    SampledFunction f;
    f.x = points;
    f.rows.assign(std::size_t(max_order + 1), std::vector<double>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        Jet j = rho.jet(points[i] / eps, max_order);
        double s = 1.0 / eps;
        for (int k = 0; k <= max_order; ++k) {
            f.rows[std::size_t(k)][i] = j.derivative(k) * s;
            s /= eps;
        }
    }
    f.lo = points.front();
    f.hi = points.back();
    f.radius = std::max(std::abs(f.lo), std::abs(f.hi));
    return f;
}

SampledFunction scaled_mollifier(const Mollifier& rho, double eps, const EvalConfig& cfg, int max_order) {
    auto x = composite_points(cfg, {mollifier_patch(rho, 0.0, eps, cfg)}, -cfg.R, cfg.R);
    auto f = scaled_mollifier(rho, eps, x, max_order);
    f.radius = cfg.R;
    return f;
}

} // namespace gtau
