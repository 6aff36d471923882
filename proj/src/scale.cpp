#include "gtau/scale.hpp"

#include "gtau/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gtau {

EpsilonGrid make_epsilon_grid(double base, int j_min, int j_max) {
    if (!(base > 1.0)) throw InvalidArgument("epsilon grid base must exceed 1");
    if (j_min < 1) throw InvalidArgument("epsilon grid j_min must be >= 1");
    if (j_max - j_min < 5) throw InvalidArgument("epsilon grid needs at least 6 points");
    EpsilonGrid g;
    g.base = base;
    g.j_min = j_min;
    g.j_max = j_max;
    for (int j = j_min; j <= j_max; ++j) {
        double e = std::pow(base, -double(j));
        if (!(e > 0.0)) throw InvalidArgument("epsilon grid underflows");
        g.values.push_back(e);
    }
    return g;
}

EpsilonGrid default_grid() { return make_epsilon_grid(2.0, 4, 20); }

ScalarNetSamples::ScalarNetSamples(std::vector<double> eps, std::vector<double> log_values)
    : eps_(std::move(eps)), log_(std::move(log_values)) {
    if (eps_.size() != log_.size()) throw InvalidArgument("eps/value length mismatch");
    for (std::size_t i = 0; i < eps_.size(); ++i) {
        if (!(eps_[i] > 0.0 && eps_[i] <= 1.0)) throw InvalidArgument("eps outside (0,1]");
        if (i > 0 && !(eps_[i] < eps_[i - 1])) throw InvalidArgument("eps not strictly decreasing");
        if (std::isnan(log_[i]) || log_[i] == std::numeric_limits<double>::infinity())
            throw InvalidArgument("scalar net value not finite");
    }
}

ScalarNetSamples ScalarNetSamples::from_values(const std::vector<double>& eps,
                                               const std::vector<double>& values) {
    std::vector<double> logs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw InvalidArgument("scalar net value must be finite and >= 0");
        logs[i] = values[i] == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(values[i]);
    }
    return ScalarNetSamples(eps, std::move(logs));
}

double ScalarNetSamples::value(std::size_t i) const { return std::exp(log_[i]); }

bool ScalarNetSamples::is_zero(std::size_t i) const { return std::isinf(log_[i]); }

ScalarNetSamples ScalarNetSamples::scaled(double c) const {
    if (!(c > 0.0)) throw InvalidArgument("scale factor must be positive");
    std::vector<double> l = log_;
    for (double& x : l) x += std::log(c);
    return ScalarNetSamples(eps_, std::move(l));
}

namespace {

void check_same_grid(const ScalarNetSamples& a, const ScalarNetSamples& b) {
    if (a.eps_values() != b.eps_values()) throw InvalidArgument("scalar nets on different grids");
}

double log_add(double x, double y) {
    if (std::isinf(x)) return y;
    if (std::isinf(y)) return x;
    double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

} // namespace

ScalarNetSamples multiply(const ScalarNetSamples& a, const ScalarNetSamples& b) {
    check_same_grid(a, b);
    std::vector<double> l(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.is_zero(i) || b.is_zero(i))
            l[i] = -std::numeric_limits<double>::infinity();
        else
            l[i] = a.log_value(i) + b.log_value(i);
    }
    return ScalarNetSamples(a.eps_values(), std::move(l));
}

ScalarNetSamples add(const ScalarNetSamples& a, const ScalarNetSamples& b) {
    check_same_grid(a, b);
    std::vector<double> l(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) l[i] = log_add(a.log_value(i), b.log_value(i));
    return ScalarNetSamples(a.eps_values(), std::move(l));
}

ScalarNetSamples pointwise_max(const ScalarNetSamples& a, const ScalarNetSamples& b) {
    check_same_grid(a, b);
    std::vector<double> l(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) l[i] = std::max(a.log_value(i), b.log_value(i));
    return ScalarNetSamples(a.eps_values(), std::move(l));
}

std::string format_number(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string format_log_magnitude(double lv) {
    char buf[64];
    if (std::isinf(lv) && lv < 0) return "0";
    if (lv > -700.0 && lv < 700.0) {
        std::snprintf(buf, sizeof buf, "%.17g", std::exp(lv));
        return buf;
    }
    double l10 = lv / std::log(10.0);
    double e = std::floor(l10);
    double m = std::pow(10.0, l10 - e);
    if (m >= 9.9999999999999995) {
        m /= 10.0;
        e += 1.0;
    }
    std::snprintf(buf, sizeof buf, "%.15fe%+.0f", m, e);
    return buf;
}

double parse_log_magnitude(std::string_view text) {
    std::string s(text);
    auto pos = s.find_first_of("eE");
    double mant = std::stod(s.substr(0, pos));
    double ex = pos == std::string::npos ? 0.0 : std::stod(s.substr(pos + 1));
    if (mant < 0) throw InvalidArgument("negative scalar net value in CSV");
    if (mant == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(mant) + ex * std::log(10.0);
}

std::string ScalarNetSamples::to_csv() const {
    std::string out = "eps,value\n";
    char buf[64];
    for (std::size_t i = 0; i < size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", eps_[i]);
        out += buf;
        out += ',';
        out += format_log_magnitude(log_[i]);
        out += '\n';
    }
    return out;
}

ScalarNetSamples ScalarNetSamples::from_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<double> eps, logs;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            if (line != "eps,value") throw InvalidArgument("expected header eps,value");
            header = false;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidArgument("malformed CSV row: " + line);
        eps.push_back(std::stod(line.substr(0, comma)));
        logs.push_back(parse_log_magnitude(line.substr(comma + 1)));
    }
    return ScalarNetSamples(std::move(eps), std::move(logs));
}

AsymptoticEstimate estimate_order(const ScalarNetSamples& s, double tail_fraction) {
    const std::size_t n = s.size();
    if (n < 6) throw InvalidArgument("estimate_order needs at least 6 samples");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw InvalidArgument("tail_fraction must lie in (0,1]");
    std::size_t t = static_cast<std::size_t>(std::ceil(tail_fraction * double(n) - 1e-12));
    t = std::min(n, std::max<std::size_t>(4, t));

    AsymptoticEstimate est;
    est.tail_fraction = tail_fraction;
    est.tail_points = t;

    std::vector<double> xs, ys;
    double sharp_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = n - t; i < n; ++i) {
        if (s.is_zero(i)) continue;
        double x = std::log(s.eps(i));
        xs.push_back(x);
        ys.push_back(s.log_value(i));
        sharp_log = std::max(sharp_log, s.log_value(i) / std::abs(x));
    }
    est.nonzero_points = xs.size();
    if (xs.empty()) {
        est.zero_tail = true;
        est.slope = kSlopeInfinity;
        est.intercept = -std::numeric_limits<double>::infinity();
        est.sharp_value = 0.0;
        return est;
    }
    if (xs.size() < 4) throw DegenerateFit("fewer than 4 nonzero tail points");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    est.slope = sxy / sxx;
    est.intercept = my - est.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i)
        est.residual = std::max(est.residual, std::abs(ys[i] - est.slope * xs[i] - est.intercept));
    est.sharp_value = std::exp(sharp_log);
    return est;
}

double sharp_distance(const ScalarNetSamples& d, double tail_fraction) {
    return estimate_order(d, tail_fraction).sharp_value;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::moderate: return "moderate";
    case Verdict::negligible: return "negligible";
    case Verdict::neither: return "neither";
    }
    return "?";
}

GeneralizedNumberClass classify_estimate(const AsymptoticEstimate& est, const Thresholds& t) {
    if (!(t.negligible_floor > 0.0) || !(t.moderate_cap > 0.0))
        throw InvalidArgument("thresholds must satisfy floor > 0 > -cap");
    GeneralizedNumberClass c;
    c.witness_order = est.slope;
    if (est.zero_tail || est.slope >= t.negligible_floor)
        c.verdict = Verdict::negligible;
    else if (est.slope >= -t.moderate_cap - t.fit_tolerance)
        c.verdict = Verdict::moderate;
    else
        c.verdict = Verdict::neither;
    return c;
}

GeneralizedNumberClass classify_scalar_net(const ScalarNetSamples& s, const Thresholds& t,
                                           double tail_fraction) {
    return classify_estimate(estimate_order(s, tail_fraction), t);
}

double GeneralizedConstant::log_abs(double eps) const {
    if (coeff == 0.0) return -std::numeric_limits<double>::infinity();
    double l = std::log(std::abs(coeff)) + eps_power * std::log(eps) + inv_eps / eps;
    if (log_power != 0.0) l += log_power * std::log(std::abs(std::log(eps)));
    return l;
}

ScalarNetSamples GeneralizedConstant::samples(const EpsilonGrid& g) const {
    std::vector<double> l;
    for (double e : g.values) l.push_back(log_abs(e));
    return ScalarNetSamples(g.values, std::move(l));
}

std::string GeneralizedConstant::to_string() const {
    std::ostringstream o;
    o << coeff;
    if (eps_power != 0.0) o << "*eps^" << eps_power;
    if (inv_eps != 0.0) o << "*exp(" << inv_eps << "/eps)";
    if (log_power != 0.0) o << "*|ln eps|^" << log_power;
    return o.str();
}

GeneralizedConstant operator*(const GeneralizedConstant& a, const GeneralizedConstant& b) {
    return {a.coeff * b.coeff, a.eps_power + b.eps_power, a.inv_eps + b.inv_eps,
            a.log_power + b.log_power};
}

} // namespace gtau
