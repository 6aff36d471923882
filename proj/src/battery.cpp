#include "gtau/battery.hpp"

#include "gtau/embed.hpp"
#include "gtau/error.hpp"
#include "gtau/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace gtau {

std::string BatteryResult::summary_csv() const {
    std::ostringstream o;
    o << "criterion,name,result,detail\n";
    for (const auto& c : criteria) {
        std::string d = c.detail;
        std::replace(d.begin(), d.end(), ',', ';');
        std::replace(d.begin(), d.end(), '\n', ' ');
        o << c.id << ',' << c.name << ',' << (c.error ? "error" : c.pass ? "pass" : "fail") << ',' << d << '\n';
    }
    return o.str();
}

bool BatteryResult::all_pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass && !c.error; });
}

bool BatteryResult::any_error() const {
    return std::any_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.error; });
}

std::vector<std::pair<std::string, std::string>> catalog_nets() {
    return {
        {"one", "embed(one)"},
        {"x2", "embed(x2)"},
        {"sin", "embed(sin)"},
        {"delta", "mollify(delta)"},
        {"delta1", "mollify(delta(1))"},
        {"drift_bump", "drift(bump(0,1),sqrtlog)"},
        {"delta_sq", "mul(mollify(delta),mollify(delta))"},
        {"pow3", "scale(pow(3),embed(one))"},
        {"blowup", "scale(exp(1),embed(one))"},
        {"expsmall_sin", "scale(exp(-1),embed(sin))"},
        {"defect_sin", "defect(sin)"},
        {"heaviside", "mollify(heaviside)"},
        {"x3", "mollify(x3)"},
        {"x_delta", "mul(embed(x),mollify(delta))"},
        {"powm2_gauss", "scale(pow(-2),embed(gauss))"},
        {"osc", "embed(osc(1))"},
    };
}

std::shared_ptr<const Mollifier> battery_mollifier(const BatteryConfig& c) {
    return std::make_shared<const Mollifier>(build_mollifier(c.plateau_inner, c.plateau_outer, c.cfg));
}

namespace {

using Net = NetExpr;

struct Ctx {
    const BatteryConfig& c;
    std::shared_ptr<const Mollifier> rho;
    ParseContext pc;
    BatteryResult& out;

    Net net(const std::string& s) const { return parse_net(s, pc); }
};

std::string num(double v) { return format_number(v); }

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

const ReportRow& row(const ClassificationReport& r, const std::string& param, int l) {
    for (const auto& x : r.rows)
        if (x.param == param && x.l == l) return x;
    throw InvalidArgument("no report row for " + param);
}

// 1: moments of the construction on the build grid
void moments(Ctx& x, CriterionResult& r) {
    EvalConfig cfg = x.c.cfg;
    auto m = check_moments(*x.rho, 8);
    std::ostringstream csv;
    csv << "k,moment\n";
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k) {
        csv << k << ',' << num(m[std::size_t(k)]) << '\n';
        if (k > 0) worst = std::max(worst, std::abs(m[std::size_t(k)]));
    }
    double mass = std::abs(m[0] - 1.0);
    r.pass = mass <= 1e-10 && worst <= 1e-8;
    r.detail = "R=" + num(cfg.R) + " N=" + std::to_string(cfg.N) + " |m0-1|=" + num(mass) + " max|m1..8|=" + num(worst);
    x.out.artifacts["c01_moments.csv"] = csv.str();
}

// 2: commutativity defects f * rho_eps - f
void embed_defect(Ctx& x, CriterionResult& r) {
    EpsilonGrid g = defect_grid();
    auto specs = nu_specs(x.c.library, 2);
    std::ostringstream csv;
    csv << "f,spec,l,eps,defect\n";
    double worst = 0.0, min_slope = kSlopeInfinity;
    for (std::string f : {"one", "x", "x3", "sin"}) {
        SweepResult s = sweep_specs(defect(smooth_catalog(f), x.rho), specs, g, x.c.cfg);
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const auto& v = s.samples[i];
            for (std::size_t j = 0; j < v.size(); ++j)
                csv << f << ',' << specs[i].param() << ',' << specs[i].order() << ',' << num(v.eps(j)) << ','
                    << format_log_magnitude(v.log_value(j)) << '\n';
            if (f == "sin") {
                min_slope = std::min(min_slope, estimate_order(v, x.c.opt.tail_fraction).slope);
            } else {
                for (double l : v.log_values()) worst = std::max(worst, std::exp(l));
            }
        }
    }
    r.pass = worst <= 1e-8 && min_slope >= x.c.opt.thresholds.negligible_floor;
    r.detail = "max defect {1;x;x3}=" + num(worst) + " min slope sin=" + num(min_slope) + " floor=" +
               num(x.c.opt.thresholds.negligible_floor);
    x.out.artifacts["c02_embed_defect.csv"] = csv.str();
}

// 3: nu family against weighted global sups
void equivalence(Ctx& x, CriterionResult& r) {
    std::ostringstream csv;
    csv << "net,expr,nu_moderate,nu_negligible,weighted_moderate,weighted_negligible,agree\n";
    int agree = 0, total = 0;
    for (const auto& [label, expr] : catalog_nets()) {
        auto q = tau_equivalence_check(x.net(expr), x.c.library, x.c.grid, x.c.cfg, x.c.opt);
        csv << label << ',' << '"' << expr << '"' << ',' << q.nu.moderate << ',' << q.nu.negligible << ','
            << q.weighted.moderate << ',' << q.weighted.negligible << ',' << q.agree << '\n';
        agree += q.agree;
        ++total;
    }
    r.pass = agree == total && total >= 12;
    r.detail = std::to_string(agree) + "/" + std::to_string(total) + " catalog nets agree";
    x.out.artifacts["c03_equivalence.csv"] = csv.str();
}

// 4: the drifting bump
void localization(Ctx& x, CriterionResult& r) {
    const std::string bump = "drift(bump(0,1),sqrtlog)";
    ClassifyOptions o = x.c.opt;
    auto global = is_negligible(x.net(bump), x.c.library, x.c.grid, x.c.cfg, o);
    const auto& g0 = row(global, TestFunction::gaussian(1.0).id(), 0);
    bool lower = true;
    for (std::size_t i = 0; i < g0.samples.size(); ++i)
        lower = lower && g0.samples.log_value(i) >= std::log(g0.samples.eps(i));
    std::ostringstream csv;
    csv << "window,negligible,zero_tail_rows,rows\n";
    csv << "global," << global.negligible << ",0," << global.rows.size() << '\n';
    // the bump leaves (-6,6) only once sqrt|ln eps| > 7
    EpsilonGrid deep = make_epsilon_grid(2.0, 4, 140);
    bool local_ok = true;
    for (int h = 1; h <= 6; ++h) {
        auto rep = is_negligible(x.net("restrict(" + bump + ",-" + std::to_string(h) + "," + std::to_string(h) + ")"),
                                 x.c.library, deep, x.c.cfg, o);
        int zero = 0;
        for (const auto& w : rep.rows) zero += w.estimate.zero_tail;
        local_ok = local_ok && rep.negligible && zero == int(rep.rows.size());
        csv << "(-" << h << ";" << h << ")," << rep.negligible << ',' << zero << ',' << rep.rows.size() << '\n';
    }
    r.pass = !global.negligible && g0.estimate.slope <= 1.2 && lower && local_ok;
    r.detail = "global negligible=" + std::to_string(global.negligible) + " slope(gauss;0)=" + num(g0.estimate.slope) +
               " nu>=eps:" + std::to_string(lower) + " restrictions negligible:" + std::to_string(local_ok);
    x.out.artifacts["c04_localization.csv"] = csv.str();
}

// 5: sharp values and the ultrametric inequality
void sharp(Ctx& x, CriterionResult& r) {
    std::mt19937_64 gen(1234567);
    std::uniform_real_distribution<double> pa(0.0, 5.0);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        double a = pa(gen);
        for (double e : x.c.grid.values) {
            double v = std::exp(a * std::log(e) / std::abs(std::log(e)));
            worst = std::max(worst, std::abs(v - std::exp(-a)));
        }
    }
    // disjoint bumps on grid nodes: sup |u - v| = eps^{min}
    EvalConfig small = x.c.cfg;
    small.R = 10.0;
    small.N = 1024;
    auto member = [](double a, double c) {
        GeneralizedConstant k;
        k.eps_power = a;
        return scale(k, embed(SmoothFn::bump(c, 1.0)));
    };
    auto dist = [&](const Net& u, const Net& v) {
        return sharp_distance(seminorm_sweep(sub(u, v), SeminormSpec::weighted(0, 0), x.c.grid, small),
                              x.c.opt.tail_fraction);
    };
    std::ostringstream csv;
    csv << "a,b,c,d_uv,d_vw,d_uw\n";
    int held = 0;
    double exact = 0.0;
    for (int t = 0; t < 200; ++t) {
        double a = pa(gen), b = pa(gen), c = pa(gen);
        Net u = member(a, 0.0), v = member(b, 2.5), w = member(c, 5.0);
        double uv = dist(u, v), vw = dist(v, w), uw = dist(u, w);
        held += uw <= std::max(uv, vw) + 1e-9;
        exact = std::max({exact, std::abs(uv - std::exp(-std::min(a, b))), std::abs(vw - std::exp(-std::min(b, c))),
                          std::abs(uw - std::exp(-std::min(a, c)))});
        csv << num(a) << ',' << num(b) << ',' << num(c) << ',' << num(uv) << ',' << num(vw) << ',' << num(uw) << '\n';
    }
    r.pass = worst <= 1e-12 && held == 200 && exact <= 1e-9;
    r.detail = "max|sharp(eps^a)-e^-a|=" + num(worst) + " ultrametric " + std::to_string(held) +
               "/200 max|d-e^-min|=" + num(exact);
    x.out.artifacts["c05_ultrametric.csv"] = csv.str();
}

// 6: order-0 plus moderate against direct sweeps
void reduced(Ctx& x, CriterionResult& r) {
    const std::vector<std::string> nets = {"defect(sin)", "mollify(delta)", "scale(0,embed(one))",
                                           "scale(exp(-1),embed(osc(1)))", "scale(pow(10),embed(one))",
                                           "drift(bump(0,1),sqrtlog)"};
    std::ostringstream csv;
    csv << "expr,criterion,direct,finite_order\n";
    int match = 0;
    for (const auto& s : nets) {
        auto q = reduced_negligibility(x.net(s), x.c.library, x.c.grid, x.c.cfg, x.c.opt);
        match += q.verdict == q.direct.negligible;
        csv << '"' << s << '"' << ',' << q.verdict << ',' << q.direct.negligible << ',' << q.finite_order << '\n';
    }
    r.pass = match == int(nets.size());
    r.detail = std::to_string(match) + "/" + std::to_string(nets.size()) + " criterion verdicts match direct sweeps";
    x.out.artifacts["c06_reduced.csv"] = csv.str();
}

// 7: G^inf instances
void regularity(Ctx& x, CriterionResult& r) {
    std::ostringstream csv;
    csv << "expr,phi,l,m\n";
    auto profile_rows = [&](const std::string& s, const ClassificationReport& rep) {
        for (const auto& phi : x.c.library) {
            auto p = ginfty_profile(rep, "schwartz", phi.id());
            for (std::size_t l = 0; l < p.size(); ++l)
                csv << '"' << s << '"' << ',' << phi.id() << ',' << l << ',' << num(p[l]) << '\n';
        }
    };
    bool ok = true;
    std::string why;
    for (std::string s : {"embed(sin)", "mollify(x3)"}) {
        auto rep = is_ginfty(x.net(s), x.c.library, x.c.grid, x.c.cfg, x.c.opt);
        profile_rows(s, rep);
        if (!rep.g_infinity) {
            ok = false;
            why += " " + s + " not G^inf";
        }
    }
    auto d = is_ginfty(x.net("mollify(delta)"), x.c.library, x.c.grid, x.c.cfg, x.c.opt);
    profile_rows("mollify(delta)", d);
    if (d.g_infinity) {
        ok = false;
        why += " delta G^inf";
    }
    double worst_step = 0.0;
    for (const auto& phi : x.c.library) {
        auto p = ginfty_profile(d, "schwartz", phi.id());
        for (std::size_t l = 1; l < p.size(); ++l) worst_step = std::max(worst_step, std::abs(p[l] - p[l - 1] - 1.0));
    }
    if (!(worst_step <= 0.15)) {
        ok = false;
        why += " step";
    }
    std::string g = TestFunction::gaussian(1.0).id();
    double s1 = row(d, g, 0).estimate.slope;
    auto sq = is_moderate(x.net("mul(mollify(delta),mollify(delta))"), x.c.library, x.c.grid, x.c.cfg, x.c.opt);
    double s2 = row(sq, g, 0).estimate.slope;
    ok = ok && within(s1, -1.0, 0.1) && within(s2, -2.0, 0.1);
    r.pass = ok;
    r.detail = "max|dm-1|=" + num(worst_step) + " slope delta=" + num(s1) + " slope delta^2=" + num(s2) + why;
    x.out.artifacts["c07_regularity.csv"] = csv.str();
}

// 8: transforms
void fourier_suite(Ctx& x, CriterionResult& r) {
    EvalConfig fc = fourier_config();
    EpsilonGrid fg = fourier_grid();
    auto rho = std::make_shared<const Mollifier>(build_mollifier(x.c.plateau_inner, x.c.plateau_outer, fc));
    ParseContext pc{rho};
    auto net = [&](const std::string& s) { return parse_net(s, pc); };
    const std::vector<std::string> members = {"embed(gauss)", "mollify(delta)", "mollify(heaviside)", "embed(x2)",
                                              "embed(sin)"};
    std::ostringstream csv;
    csv << "check,subject,value\n";
    double rt = 0.0;
    for (const auto& s : members) {
        for (double v : round_trip_residual(net(s), fg, fc)) rt = std::max(rt, v);
    }
    csv << "round_trip,catalog," << num(rt) << '\n';

    RapidDistNet G = fourier_net(net("embed(gauss)"), fg, fc);
    double gauss = 0.0;
    for (std::size_t i = 0; i < fg.size(); ++i)
        for (std::size_t k = 0; k < G.spec.N; ++k) {
            double xi = G.spec.xi(k);
            gauss = std::max(gauss, std::abs(G.value(i, k) - std::sqrt(M_PI) * std::exp(-xi * xi / 4.0)));
        }
    csv << "gaussian,closed_form," << num(gauss) << '\n';

    // F(u') = i xi F(u), relative to the larger side
    double exch = 0.0;
    for (std::string s : {"embed(gauss)", "mollify(delta)"}) {
        RapidDistNet U = fourier_net(net(s), fg, fc), D = fourier_net(derive(1, net(s)), fg, fc);
        for (std::size_t i = 0; i < fg.size(); ++i) {
            double diff = 0.0, size = 1.0;
            for (std::size_t k = 0; k < U.spec.N; ++k) {
                Complex a = D.value(i, k), b = Complex(0.0, U.spec.xi(k)) * U.value(i, k);
                diff = std::max(diff, std::abs(a - b));
                size = std::max(size, std::abs(b));
            }
            exch = std::max(exch, diff / size);
        }
    }
    // F(x u) = i d/dxi F(u) for the gaussian
    RapidDistNet XG = fourier_net(net("mul(embed(x),embed(gauss))"), fg, fc);
    for (std::size_t i = 0; i < fg.size(); ++i)
        for (std::size_t k = 0; k < XG.spec.N; ++k) {
            double xi = XG.spec.xi(k);
            Complex want(0.0, -0.5 * std::sqrt(M_PI) * xi * std::exp(-xi * xi / 4.0));
            exch = std::max(exch, std::abs(XG.value(i, k) - want));
        }
    csv << "exchange,gauss;delta," << num(exch) << '\n';

    RapidDistNet T = fourier_net(net("mollify(delta)"), fg, fc);
    double at0 = 0.0;
    for (std::size_t i = 0; i < fg.size(); ++i) at0 = std::max(at0, std::abs(T.value(i, T.spec.N / 2) - 1.0));
    csv << "delta_at_0,mollify(delta)," << num(at0) << '\n';

    int members_ok = 0;
    for (const auto& s : members) {
        auto rep = is_rapidly_decreasing_gdist(fourier_net(net(s), fg, fc), x.c.library, x.c.opt);
        members_ok += rep.moderate;
        csv << "member," << s << ',' << rep.moderate << '\n';
    }
    r.pass = rt <= 1e-8 && gauss <= 1e-8 && exch <= 1e-6 && at0 <= 1e-9 && members_ok == int(members.size());
    r.detail = "round trip=" + num(rt) + " gaussian=" + num(gauss) + " exchange=" + num(exch) + " |T(0)-1|=" +
               num(at0) + " members " + std::to_string(members_ok) + "/" + std::to_string(members.size());
    x.out.artifacts["c08_fourier.csv"] = csv.str();
}

// 9: singular-support calculus under tau^infinity
void singsupp(Ctx& x, CriterionResult& r) {
    std::vector<double> probes;
    for (int k = 0; k < 12; ++k) probes.push_back(-2.75 + 0.5 * k);
    const double w = 0.4;
    auto S = [&](const Net& u) {
        auto rep = singular_support(u, Sharpness::tau_infinity, probes, w, x.c.library, x.c.grid, x.c.cfg, x.c.opt);
        auto v = rep.singular_probes();
        return std::set<double>(v.begin(), v.end());
    };
    auto subset = [](const std::set<double>& a, const std::set<double>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    auto join = [](std::set<double> a, const std::set<double>& b) {
        a.insert(b.begin(), b.end());
        return a;
    };
    auto str = [](const std::set<double>& s) {
        std::string o = "{";
        for (double v : s) o += (o.size() > 1 ? " " : "") + num(v);
        return o + "}";
    };
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"mollify(heaviside)", "embed(sin)"},
        {"mollify(delta)", "embed(x2)"},
        {"mollify(heaviside)", "mollify(delta(0,1))"},
        {"mollify(delta)", "mollify(heaviside(1))"},
        {"mollify(delta(1,-1))", "embed(gauss)"},
    };
    Net g = embed(smooth_catalog("x"));
    std::ostringstream csv;
    csv << "u,v,S(u),S(v),S(u+v),S(uv),S(du),S(gu),S(Pu),holds\n";
    int held = 0;
    bool heaviside_ok = false;
    for (const auto& [us, vs] : pairs) {
        Net u = x.net(us), v = x.net(vs);
        auto Su = S(u), Sv = S(v), Ssum = S(add(u, v)), Sprod = S(mul(u, v)), Sd = S(derive(1, u)),
             Sg = S(mul(g, u)), Sp = S(add(derive(2, u), mul(g, derive(1, u))));
        auto uv = join(Su, Sv);
        bool ok = subset(Ssum, uv) && subset(Sprod, uv) && subset(Sd, Su) && subset(Sg, Su) && subset(Sp, Su);
        held += ok;
        if (us == "mollify(heaviside)") heaviside_ok = Su == std::set<double>{-0.25, 0.25};
        csv << '"' << us << '"' << ',' << '"' << vs << '"' << ',' << str(Su) << ',' << str(Sv) << ',' << str(Ssum)
            << ',' << str(Sprod) << ',' << str(Sd) << ',' << str(Sg) << ',' << str(Sp) << ',' << ok << '\n';
    }
    r.pass = held == int(pairs.size()) && heaviside_ok;
    r.detail = std::to_string(held) + "/" + std::to_string(pairs.size()) +
               " instances satisfy all inclusions; S(iota(H)) = cells at 0: " + std::to_string(heaviside_ok);
    x.out.artifacts["c09_singular_support.csv"] = csv.str();
}

} // namespace

BatteryResult run_battery(const BatteryConfig& c) {
    BatteryResult out;
    auto rho = battery_mollifier(c);
    Ctx x{c, rho, ParseContext{rho}, out};
    const std::vector<std::pair<std::string, std::function<void(Ctx&, CriterionResult&)>>> all = {
        {"mollifier_moments", moments},     {"embedding_diagram", embed_defect},
        {"equivalence", equivalence},       {"localization_failure", localization},
        {"sharp_topology", sharp},          {"reduced_negligibility", reduced},
        {"regularity", regularity},         {"fourier", fourier_suite},
        {"singular_support", singsupp},
    };
    for (std::size_t i = 0; i < all.size(); ++i) {
        int id = int(i) + 1;
        if (!c.only.empty() && std::find(c.only.begin(), c.only.end(), id) == c.only.end()) continue;
        CriterionResult r;
        r.id = id;
        r.name = all[i].first;
        try {
            all[i].second(x, r);
        } catch (const std::exception& e) {
            r.error = true;
            r.pass = false;
            r.detail = e.what();
        }
        out.criteria.push_back(std::move(r));
    }
    return out;
}

BatteryResult run_report(const BatteryConfig& c) {
    BatteryResult first = run_battery(c);
    unsigned t0 = worker_threads();
    // rerun with a different worker count
    const char* prev = std::getenv("GTAU_THREADS");
    std::string saved = prev ? prev : "";
    unsigned t = t0 == 1 ? 2u : 1u;
    setenv("GTAU_THREADS", std::to_string(t).c_str(), 1);
    BatteryResult second = run_battery(c);
    if (prev)
        setenv("GTAU_THREADS", saved.c_str(), 1);
    else
        unsetenv("GTAU_THREADS");
    CriterionResult d;
    d.id = 10;
    d.name = "determinism";
    d.pass = first.summary_csv() == second.summary_csv() && first.artifacts == second.artifacts;
    d.detail = std::to_string(first.artifacts.size()) + " CSV artifacts compared across " + std::to_string(t0) + " and " +
               std::to_string(t) + " workers";
    first.criteria.push_back(d);
    return first;
}

} // namespace gtau
