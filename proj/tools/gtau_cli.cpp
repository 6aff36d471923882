#include "gtau/battery.hpp"
#include "gtau/classify.hpp"
#include "gtau/embed.hpp"
#include "gtau/error.hpp"
#include "gtau/fourier.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace gtau;

namespace {

struct Globals {
    double grid_base = 2.0;
    int grid_jmin = 4, grid_jmax = 20;
    double radius = 40.0;
    std::size_t points = 1u << 14;
    double floor = 8.0, cap = 20.0, fit_tolerance = 0.05, tail_fraction = 0.5;
    int L = 3, q_max = 10;
    double max_spread = 0.5;
    double plateau_inner = kPlateauInner, plateau_outer = kPlateauOuter;
    int patch_density = 32;
    std::string scheme = "closed_form";
    std::string library;
};

struct Run {
    Globals g;
    CLI::App* app = nullptr;

    bool given(const char* name) const { return app->get_option(name)->count() > 0; }

    EvalConfig cfg() const {
        EvalConfig c;
        c.R = g.radius;
        c.N = g.points;
        c.patch_density = g.patch_density;
        if (g.scheme == "closed_form") c.scheme = DerivativeScheme::closed_form;
        else if (g.scheme == "fd4") c.scheme = DerivativeScheme::finite_difference_4;
        else if (g.scheme == "spectral") c.scheme = DerivativeScheme::spectral;
        else throw InvalidArgument("unknown derivative scheme " + g.scheme);
        c.validate();
        return c;
    }
    EpsilonGrid grid() const { return make_epsilon_grid(g.grid_base, g.grid_jmin, g.grid_jmax); }
    ClassifyOptions opt() const {
        ClassifyOptions o;
        o.thresholds = {g.cap, g.floor, g.fit_tolerance};
        o.tail_fraction = g.tail_fraction;
        o.L = g.L;
        o.q_max = g.q_max;
        o.max_spread = g.max_spread;
        return o;
    }
    std::vector<TestFunction> library() const {
        return g.library.empty() ? default_library() : load_library(g.library);
    }
    std::shared_ptr<const Mollifier> rho(const EvalConfig& c, int required = 8) const {
        return std::make_shared<const Mollifier>(build_mollifier(g.plateau_inner, g.plateau_outer, c, required));
    }
    BatteryConfig battery() const {
        BatteryConfig b;
        b.grid = grid();
        b.cfg = cfg();
        b.opt = opt();
        b.library = library();
        b.plateau_inner = g.plateau_inner;
        b.plateau_outer = g.plateau_outer;
        return b;
    }
};

std::string num(double v) { return format_number(v); }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

std::string join_dir(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_file(path, text);
}

const char* yes(bool b) { return b ? "true" : "false"; }

std::vector<double> parse_probes(const std::string& s) {
    std::vector<double> v;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double d = std::stod(item, &used);
        if (used != item.size()) throw InvalidArgument("bad probe '" + item + "'");
        v.push_back(d);
    }
    if (v.empty()) throw InvalidArgument("no probes given");
    return v;
}

// ---- subcommands ----

struct ClassifyArgs {
    std::string net, mode = "moderate", csv, probes = "-2.75,-2.25,-1.75,-1.25,-0.75,-0.25,0.25,0.75,1.25,1.75,2.25,2.75";
    std::string sharp = "tauinf";
    double window = 0.4;
};

int cmd_classify(const Run& run, const ClassifyArgs& a) {
    EvalConfig cfg = run.cfg();
    auto rho = run.rho(cfg);
    NetExpr e = parse_net(a.net, ParseContext{rho});
    auto lib = run.library();
    auto grid = run.grid();
    auto opt = run.opt();
    if (a.mode == "moderate" || a.mode == "negligible") {
        auto r = is_moderate(e, lib, grid, cfg, opt);
        emit(a.csv, r.to_csv());
        bool v = a.mode == "moderate" ? r.moderate : r.negligible;
        std::cout << a.mode << ": " << yes(v) << '\n';
        return v ? 0 : 1;
    }
    if (a.mode == "ginfty") {
        auto r = is_ginfty(e, lib, grid, cfg, opt);
        emit(a.csv, r.to_csv());
        std::cout << "ginfty: " << yes(r.g_infinity) << " uniform_m=" << num(r.uniform_m) << '\n';
        return r.g_infinity ? 0 : 1;
    }
    if (a.mode == "equiv") {
        auto r = tau_equivalence_check(e, lib, grid, cfg, opt);
        emit(a.csv, std::string("# ") + to_string(r.nu.definition_used) + "\n" + r.nu.to_csv() + "# " +
                        to_string(r.weighted.definition_used) + "\n" + r.weighted.to_csv());
        std::cout << "equiv: " << yes(r.agree) << " nu moderate=" << yes(r.nu.moderate)
                  << " negligible=" << yes(r.nu.negligible) << " weighted moderate=" << yes(r.weighted.moderate)
                  << " negligible=" << yes(r.weighted.negligible) << '\n';
        return r.agree ? 0 : 1;
    }
    if (a.mode == "reduced") {
        auto r = reduced_negligibility(e, lib, grid, cfg, opt);
        emit(a.csv, "# order 0\n" + r.order0.to_csv() + "# direct l = 0..2\n" + r.direct.to_csv());
        std::cout << "reduced: " << yes(r.verdict) << " direct=" << yes(r.direct.negligible)
                  << (r.finite_order ? " finite-order, inconclusive" : "") << '\n';
        return r.verdict ? 0 : 1;
    }
    if (a.mode == "singsupp") {
        Sharpness s;
        if (a.sharp == "tau") s = Sharpness::tau;
        else if (a.sharp == "tauinf") s = Sharpness::tau_infinity;
        else throw InvalidArgument("--sharp must be tau or tauinf");
        auto r = singular_support(e, s, parse_probes(a.probes), a.window, lib, grid, cfg, opt);
        emit(a.csv, r.to_csv());
        auto sp = r.singular_probes();
        std::cout << "singsupp: {";
        for (std::size_t i = 0; i < sp.size(); ++i) std::cout << (i ? "," : "") << num(sp[i]);
        std::cout << "}\n";
        return sp.empty() ? 0 : 1;
    }
    throw InvalidArgument("unknown mode " + a.mode);
}

struct EmbedArgs {
    std::string f = "sin", csv;
    int moments = 8, l = 0;
};

int cmd_embed_check(const Run& run, const EmbedArgs& a) {
    EvalConfig cfg = run.cfg();
    auto rho = run.rho(cfg, a.moments);
    auto lib = run.library();
    EpsilonGrid grid = run.given("--grid-jmax") || run.given("--grid-jmin") || run.given("--grid-base")
                           ? run.grid()
                           : defect_grid();
    auto spec = SeminormSpec::schwartz(lib.front(), a.l);
    auto s = defect_sweep(smooth_catalog(a.f), rho, spec, grid, cfg);
    auto opt = run.opt();
    auto est = estimate_order(s, opt.tail_fraction);
    auto cls = classify_estimate(est, opt.thresholds);
    double worst = 0.0;
    for (double v : s.log_values()) worst = std::max(worst, std::exp(v));
    std::ostringstream o;
    o << "eps,defect\n";
    for (std::size_t i = 0; i < s.size(); ++i) o << num(s.eps(i)) << ',' << format_log_magnitude(s.log_value(i)) << '\n';
    o << "# slope=" << num(est.slope) << " max=" << num(worst) << " verdict=" << to_string(cls.verdict) << '\n';
    emit(a.csv, o.str());
    std::cout << "embed-check " << a.f << ": slope=" << num(est.slope) << " max defect=" << num(worst)
              << " verdict=" << to_string(cls.verdict) << '\n';
    return cls.negligible() ? 0 : 1;
}

struct FourierArgs {
    std::string net, out;
    std::size_t stride = 1;
};

int cmd_fourier(const Run& run, const FourierArgs& a) {
    EvalConfig cfg = run.given("--points") || run.given("--radius") ? run.cfg() : fourier_config();
    EpsilonGrid grid = run.given("--grid-jmax") || run.given("--grid-jmin") || run.given("--grid-base")
                           ? run.grid()
                           : fourier_grid();
    if (a.stride == 0) throw InvalidArgument("--stride must be positive");
    auto rho = run.rho(cfg);
    RapidDistNet T = fourier_net(parse_net(a.net, ParseContext{rho}), grid, cfg);
    std::ostringstream o;
    o << "eps,xi,re,im\n";
    for (std::size_t i = 0; i < T.slices.size(); ++i) {
        const auto& s = T.slices[i];
        for (const auto& d : s.deltas) {
            Complex c = d.coeff * std::exp(s.log_scale);
            o << "# delta eps=" << num(s.eps) << " k=" << d.k << " center=" << num(d.center) << " coeff=" << num(c.real())
              << (c.imag() < 0 ? "" : "+") << num(c.imag()) << "i\n";
        }
        for (std::size_t k = 0; k < T.spec.N; k += a.stride) {
            Complex v = T.value(i, k);
            o << num(s.eps) << ',' << num(T.spec.xi(k)) << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
        }
    }
    emit(a.out, o.str());
    return 0;
}

struct MomentArgs {
    int k = 12, required = 8;
};

int cmd_moments(const Run& run, const MomentArgs& a) {
    EvalConfig cfg = run.cfg();
    try {
        Mollifier rho = build_mollifier(run.g.plateau_inner, run.g.plateau_outer, cfg, a.required);
        auto m = check_moments(rho, a.k);
        std::cout << "k,moment\n";
        for (std::size_t k = 0; k < m.size(); ++k) std::cout << k << ',' << num(m[k]) << '\n';
        std::cout << "# vanishing through order " << rho.moment_order() << '\n';
        return 0;
    } catch (const MomentFailure& f) {
        std::cout << "moment failure at k=" << f.first_failing_k << " value=" << num(f.moment) << '\n';
        return 1;
    }
}

struct DemoArgs {
    std::string name, dir = ".", f = "x3";
};

int cmd_demo(const Run& run, const DemoArgs& a) {
    BatteryConfig b = run.battery();
    auto rho = battery_mollifier(b);
    ParseContext pc{rho};
    if (a.name == "localization") {
        b.only = {4};
        auto r = run_battery(b);
        write_file(join_dir(a.dir, "localization.csv"), r.artifacts["c04_localization.csv"]);
        std::cout << r.artifacts["c04_localization.csv"] << r.criteria[0].detail << '\n';
        if (r.criteria[0].error) throw Error(r.criteria[0].detail);
        return r.criteria[0].pass ? 0 : 1;
    }
    if (a.name == "delta-squared") {
        auto r = is_moderate(parse_net("mul(mollify(delta),mollify(delta))", pc), b.library, b.grid, b.cfg, b.opt);
        write_file(join_dir(a.dir, "delta_squared.csv"), r.to_csv());
        double s = 0.0;
        for (const auto& row : r.rows)
            if (row.param == TestFunction::gaussian(1.0).id() && row.l == 0) s = row.estimate.slope;
        std::cout << "delta-squared: slope(gauss,0)=" << num(s) << " moderate=" << yes(r.moderate) << '\n';
        return std::abs(s + 2.0) <= 0.1 ? 0 : 1;
    }
    if (a.name == "embed-defect") {
        auto specs = nu_specs(b.library, 2);
        auto sw = sweep_specs(defect(smooth_catalog(a.f), rho), specs, defect_grid(), b.cfg);
        std::ostringstream o;
        o << "spec,l,eps,defect\n";
        double worst = 0.0, slope = kSlopeInfinity;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const auto& s = sw.samples[i];
            for (std::size_t j = 0; j < s.size(); ++j) {
                o << specs[i].param() << ',' << specs[i].order() << ',' << num(s.eps(j)) << ','
                  << format_log_magnitude(s.log_value(j)) << '\n';
                worst = std::max(worst, std::exp(s.log_value(j)));
            }
            slope = std::min(slope, estimate_order(s, b.opt.tail_fraction).slope);
        }
        write_file(join_dir(a.dir, "embed_defect.csv"), o.str());
        bool ok = worst <= 1e-8 || slope >= b.opt.thresholds.negligible_floor;
        std::cout << "embed-defect " << a.f << ": max defect=" << num(worst) << " min slope=" << num(slope)
                  << " negligible=" << yes(ok) << '\n';
        return ok ? 0 : 1;
    }
    if (a.name == "diagram") {
        EvalConfig fc = fourier_config();
        EpsilonGrid fg = fourier_grid();
        auto frho = std::make_shared<const Mollifier>(build_mollifier(b.plateau_inner, b.plateau_outer, fc));
        ParseContext fpc{frho};
        // F(iota f) against iota_OC(F f) for the gaussian, and classical against componentwise for delta
        auto top = fourier_net(parse_net("mollify(gauss)", fpc), fg, fc);
        auto side = iota_OC(SmoothOM{SmoothFn::gaussian(0.25)}, frho, fg, fc, std::sqrt(M_PI));
        auto d1 = spectral_difference(top, side);
        auto cl = classical_fourier_tau(parse_net("mollify(delta)", fpc), frho, fg, fc);
        auto cw = fourier_net(parse_net("mollify(delta)", fpc), fg, fc);
        auto d2 = spectral_difference(cl, cw);
        auto t = b.opt.thresholds;
        auto c1 = classify_scalar_net(d1, t, b.opt.tail_fraction), c2 = classify_scalar_net(d2, t, b.opt.tail_fraction);
        std::ostringstream o;
        o << "path,eps,difference\n";
        for (std::size_t i = 0; i < d1.size(); ++i)
            o << "gauss_F_iota_vs_iotaOC_F," << num(d1.eps(i)) << ',' << format_log_magnitude(d1.log_value(i)) << '\n';
        for (std::size_t i = 0; i < d2.size(); ++i)
            o << "delta_classical_vs_componentwise," << num(d2.eps(i)) << ',' << format_log_magnitude(d2.log_value(i))
              << '\n';
        write_file(join_dir(a.dir, "diagram.csv"), o.str());
        std::cout << "diagram: gaussian square " << to_string(c1.verdict) << ", delta classical/componentwise "
                  << to_string(c2.verdict) << '\n';
        return c1.negligible() && c2.negligible() ? 0 : 1;
    }
    std::cerr << "unknown demo '" << a.name << "'\n";
    return 2;
}

int cmd_report(const Run& run, const std::string& dir) {
    BatteryResult r = run_report(run.battery());
    write_file(join_dir(dir, "summary.csv"), r.summary_csv());
    for (const auto& [name, text] : r.artifacts) write_file(join_dir(dir, name), text);
    for (const auto& c : r.criteria)
        std::cout << (c.error ? "[error] " : c.pass ? "[pass]  " : "[fail]  ") << c.id << " " << c.name << ": "
                  << c.detail << '\n';
    if (r.any_error()) return 2;
    return r.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gtau: generalized functions as eps-nets on truncated grids"};
    app.require_subcommand(1);
    app.fallthrough();
    Run run;
    run.app = &app;
    Globals& g = run.g;
    app.set_config("--config", "", "key = value configuration file")->check(CLI::ExistingFile);
    app.allow_config_extras(false);
    app.add_option("--grid-base,--grid_base", g.grid_base, "eps grid base");
    app.add_option("--grid-jmin,--grid_jmin", g.grid_jmin, "first exponent");
    app.add_option("--grid-jmax,--grid_jmax", g.grid_jmax, "last exponent");
    app.add_option("--radius", g.radius, "truncation radius R");
    app.add_option("--points", g.points, "base grid intervals N");
    app.add_option("--floor,--negligible_floor", g.floor, "negligibility floor");
    app.add_option("--cap,--moderate_cap", g.cap, "moderateness cap");
    app.add_option("--fit-tolerance,--fit_tolerance", g.fit_tolerance);
    app.add_option("--tail-fraction,--tail_fraction", g.tail_fraction);
    app.add_option("--depth,--L", g.L, "derivative depth L");
    app.add_option("--q-max,--q_max", g.q_max);
    app.add_option("--max-spread,--max_spread", g.max_spread);
    app.add_option("--plateau-inner,--plateau_inner", g.plateau_inner);
    app.add_option("--plateau-outer,--plateau_outer", g.plateau_outer);
    app.add_option("--patch-density,--patch_density", g.patch_density);
    app.add_option("--scheme", g.scheme, "closed_form | fd4 | spectral");
    app.add_option("--library", g.library, "test-function library file");

    ClassifyArgs ca;
    auto* classify = app.add_subcommand("classify", "classify a net");
    classify->add_option("--net", ca.net)->required();
    classify->add_option("--mode", ca.mode)
        ->check(CLI::IsMember({"moderate", "negligible", "ginfty", "equiv", "reduced", "singsupp"}));
    classify->add_option("--csv", ca.csv, "report path, stdout if omitted");
    classify->add_option("--probes", ca.probes, "comma separated probe centers");
    classify->add_option("--window", ca.window);
    classify->add_option("--sharp", ca.sharp, "tau | tauinf");

    EmbedArgs ea;
    auto* embedc = app.add_subcommand("embed-check", "commutativity defect sweep");
    embedc->add_option("--f", ea.f);
    embedc->add_option("--moments", ea.moments, "required vanishing moments");
    embedc->add_option("--l", ea.l);
    embedc->add_option("--csv", ea.csv);

    FourierArgs fa;
    auto* fourier = app.add_subcommand("fourier", "componentwise transform");
    fourier->add_option("--net", fa.net)->required();
    fourier->add_option("--out", fa.out);
    fourier->add_option("--stride", fa.stride);

    MomentArgs ma;
    auto* moments = app.add_subcommand("moments", "mollifier moments");
    moments->add_option("--k", ma.k);
    moments->add_option("--required", ma.required);

    DemoArgs da;
    auto* demo = app.add_subcommand("demo", "demo scenarios");
    demo->add_option("name", da.name, "localization | delta-squared | embed-defect | diagram")->required();
    demo->add_option("--out-dir", da.dir);
    demo->add_option("--f", da.f);

    std::string report_dir = "report";
    auto* report = app.add_subcommand("report", "acceptance battery");
    report->add_option("--out-dir", report_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (*classify) return cmd_classify(run, ca);
        if (*embedc) return cmd_embed_check(run, ea);
        if (*fourier) return cmd_fourier(run, fa);
        if (*moments) return cmd_moments(run, ma);
        if (*demo) return cmd_demo(run, da);
        if (*report) return cmd_report(run, report_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
