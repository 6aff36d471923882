#include "gtau/classify.hpp"

#include "gtau/error.hpp"
#include "net_internal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace gtau {

const char* to_string(Definition d) { return d == Definition::nu_family ? "nu_family" : "weighted_global"; }

std::string ClassificationReport::to_csv() const {
    std::ostringstream o;
    o << "family,param,l,q,slope,sharp,residual,verdict,truncated\n";
    for (const auto& r : rows) {
        o << r.family << ',' << r.param << ',' << r.l << ',' << r.q << ',' << detail::format_number(r.estimate.slope)
          << ',' << detail::format_number(r.estimate.sharp_value) << ','
          << detail::format_number(r.estimate.residual) << ',' << to_string(r.verdict) << ','
          << (r.truncated ? 1 : 0) << '\n';
    }
    return o.str();
}

std::vector<SeminormSpec> nu_specs(const std::vector<TestFunction>& library, int L) {
    if (library.empty()) throw InvalidArgument("test-function library is empty");
    if (L < 0) throw InvalidArgument("derivative depth must be >= 0");
    std::vector<SeminormSpec> s;
    for (const auto& phi : library)
        for (int l = 0; l <= L; ++l) s.push_back(SeminormSpec::schwartz(phi, l));
    return s;
}

ClassificationReport classify_rows(const std::vector<SeminormSpec>& specs, const SweepResult& sweep,
                                   const ClassifyOptions& opt) {
    ClassificationReport rep;
    rep.moderate = rep.negligible = true;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        ReportRow r;
        r.family = specs[i].family_name();
        r.param = specs[i].param();
        r.l = specs[i].order();
        if (auto w = std::get_if<WeightedSpec>(&specs[i].family)) r.q = -w->r;
        r.samples = sweep.samples[i];
        try {
            r.estimate = estimate_order(r.samples, opt.tail_fraction);
        } catch (const DegenerateFit&) {
            // values underflowing to 0 inside the tail: dying, read as a zero tail
            if (!r.samples.is_zero(r.samples.size() - 1)) throw;
            r.estimate.zero_tail = true;
            r.estimate.slope = kSlopeInfinity;
            r.estimate.tail_fraction = opt.tail_fraction;
            rep.notes.push_back(r.family + " " + r.param + " l=" + std::to_string(r.l) + ": tail underflows");
        }
        r.verdict = classify_estimate(r.estimate, opt.thresholds).verdict;
        r.truncated = sweep.truncated[i];
        rep.moderate = rep.moderate && r.verdict != Verdict::neither;
        rep.negligible = rep.negligible && r.verdict == Verdict::negligible;
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

ClassificationReport is_moderate(const NetExpr& e, const std::vector<TestFunction>& library, const EpsilonGrid& grid,
                                 const EvalConfig& cfg, const ClassifyOptions& opt) {
    auto specs = nu_specs(library, opt.L);
    return classify_rows(specs, sweep_specs(e, specs, grid, cfg), opt);
}

ClassificationReport is_moderate(const SampledNet& net, const std::vector<TestFunction>& library,
                                 const ClassifyOptions& opt) {
    auto specs = nu_specs(library, opt.L);
    return classify_rows(specs, sweep_specs(net, specs), opt);
}

ClassificationReport is_negligible(const NetExpr& e, const std::vector<TestFunction>& library,
                                   const EpsilonGrid& grid, const EvalConfig& cfg, const ClassifyOptions& opt) {
    return is_moderate(e, library, grid, cfg, opt);
}

ClassificationReport weighted_classify(const NetExpr& e, const EpsilonGrid& grid, const EvalConfig& cfg,
                                       const ClassifyOptions& opt) {
    if (opt.q_max < 0) throw InvalidArgument("q_max must be >= 0");
    std::vector<SeminormSpec> specs;
    for (int l = 0; l <= opt.L; ++l)
        for (int q = 0; q <= opt.q_max; ++q) specs.push_back(SeminormSpec::weighted(-q, l));
    ClassificationReport rep = classify_rows(specs, sweep_specs(e, specs, grid, cfg), opt);
    rep.definition_used = Definition::weighted_global;
    rep.moderate = rep.negligible = true;
    for (int l = 0; l <= opt.L; ++l) {
        int qm = -1, qn = -1;
        for (const auto& r : rep.rows) {
            if (r.l != l || r.truncated) continue;
            if (qm < 0 && r.verdict != Verdict::neither) qm = r.q;
            if (qn < 0 && r.verdict == Verdict::negligible) qn = r.q;
        }
        rep.moderate = rep.moderate && qm >= 0;
        rep.negligible = rep.negligible && qn >= 0;
        std::ostringstream o;
        o << "l=" << l << ": moderate q=" << (qm < 0 ? std::string("none") : std::to_string(qm))
          << ", negligible q=" << (qn < 0 ? std::string("none") : std::to_string(qn));
        rep.notes.push_back(o.str());
    }
    return rep;
}

EquivalenceResult tau_equivalence_check(const NetExpr& e, const std::vector<TestFunction>& library,
                                        const EpsilonGrid& grid, const EvalConfig& cfg, const ClassifyOptions& opt) {
    EquivalenceResult r;
    r.nu = is_moderate(e, library, grid, cfg, opt);
    r.weighted = weighted_classify(e, grid, cfg, opt);
    r.agree = r.nu.moderate == r.weighted.moderate && r.nu.negligible == r.weighted.negligible;
    return r;
}

std::vector<double> ginfty_profile(const ClassificationReport& r, const std::string& family,
                                   const std::string& param) {
    std::map<int, double> m;
    for (const auto& row : r.rows)
        if (row.family == family && row.param == param)
            m[row.l] = row.estimate.zero_tail ? -std::numeric_limits<double>::infinity() : -row.estimate.slope;
    std::vector<double> out;
    for (const auto& [l, v] : m) out.push_back(v);
    return out;
}

ClassificationReport is_ginfty(const NetExpr& e, const std::vector<TestFunction>& library, const EpsilonGrid& grid,
                               const EvalConfig& cfg, const ClassifyOptions& opt) {
    ClassifyOptions o = opt;
    o.L = std::max(opt.L, 2);
    ClassificationReport rep = is_moderate(e, library, grid, cfg, o);
    bool uniform = true;
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& phi : library) {
        auto prof = ginfty_profile(rep, "schwartz", phi.id());
        // decaying rows are bounded by m = 0
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double v : prof) {
            v = std::max(v, 0.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi >= lo) {
            top = std::max(top, hi);
            if (hi - lo > opt.max_spread) {
                uniform = false;
                rep.notes.push_back(phi.id() + ": profile spread " + detail::format_number(hi - lo));
            }
        }
    }
    rep.g_infinity = rep.moderate && uniform;
    rep.uniform_m = std::isfinite(top) ? top : 0.0;
    return rep;
}

namespace {

// slope over the later half of the tail against the earlier half
bool power_law_tail(const ScalarNetSamples& s, double tail_fraction) {
    std::size_t n = s.size();
    std::size_t t = std::min(n, std::max<std::size_t>(4, std::size_t(std::ceil(tail_fraction * double(n)))));
    std::vector<double> x, y;
    for (std::size_t i = n - t; i < n; ++i)
        if (!s.is_zero(i)) {
            x.push_back(std::log(s.eps(i)));
            y.push_back(s.log_value(i));
        }
    if (x.size() < 4) return false;
    auto fit = [&](std::size_t a, std::size_t b) {
        double mx = 0, my = 0;
        for (std::size_t i = a; i < b; ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= double(b - a);
        my /= double(b - a);
        double sxy = 0, sxx = 0;
        for (std::size_t i = a; i < b; ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
        }
        return sxy / sxx;
    };
    std::size_t h = x.size() / 2;
    return fit(h, x.size()) - fit(0, h) < 0.5;
}

} // namespace

ReducedResult reduced_negligibility(const NetExpr& e, const std::vector<TestFunction>& library,
                                    const EpsilonGrid& grid, const EvalConfig& cfg, const ClassifyOptions& opt) {
    ReducedResult r;
    ClassifyOptions o0 = opt, o2 = opt;
    o0.L = 0;
    o2.L = 2;
    r.order0 = is_moderate(e, library, grid, cfg, o0);
    r.moderate = is_moderate(e, library, grid, cfg, opt);
    r.direct = is_moderate(e, library, grid, cfg, o2);
    r.verdict = r.order0.negligible && r.moderate.moderate;
    if (r.order0.negligible)
        for (const auto& row : r.order0.rows)
            if (!row.estimate.zero_tail && power_law_tail(row.samples, opt.tail_fraction)) r.finite_order = true;
    if (r.finite_order)
        r.order0.notes.push_back("finite-order, inconclusive: order-0 rows pass the floor with a power law");
    if (r.verdict != r.direct.negligible)
        r.order0.notes.push_back("criterion and direct l = 0..2 sweeps disagree");
    return r;
}

std::vector<double> SingularSupportReport::singular_probes() const {
    std::vector<double> s;
    for (std::size_t i = 0; i < probes.size(); ++i)
        if (singular[i]) s.push_back(probes[i]);
    return s;
}

std::string SingularSupportReport::to_csv() const {
    std::ostringstream o;
    o << "probe,lo,hi,verdict\n";
    for (std::size_t i = 0; i < probes.size(); ++i)
        o << detail::format_number(probes[i]) << ',' << detail::format_number(probes[i] - window) << ','
          << detail::format_number(probes[i] + window) << ',' << (singular[i] ? "singular" : "regular") << '\n';
    return o.str();
}

SingularSupportReport singular_support(const NetExpr& u, Sharpness sharp, const std::vector<double>& probes,
                                       double window, const std::vector<TestFunction>& library,
                                       const EpsilonGrid& grid, const EvalConfig& cfg, const ClassifyOptions& opt) {
    if (!(window > 0.0)) throw InvalidArgument("window must be positive");
    SingularSupportReport rep;
    rep.probes = probes;
    rep.window = window;
    rep.sharp = sharp;
    for (double p : probes) {
        if (p - window < -cfg.R || p + window > cfg.R) throw InvalidArgument("probe window exceeds the domain");
        NetExpr local = restrict(u, p - window, p + window);
        ClassificationReport r = sharp == Sharpness::tau ? is_moderate(local, library, grid, cfg, opt)
                                                         : is_ginfty(local, library, grid, cfg, opt);
        rep.singular.push_back(sharp == Sharpness::tau ? !r.moderate : !r.g_infinity);
    }
    return rep;
}

} // namespace gtau
