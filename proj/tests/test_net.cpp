#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "gtau/error.hpp"

#include <cmath>

using namespace gtau;
using fixture::cfg;
using fixture::net;

namespace {

std::vector<double> at(const NetExpr& e, double eps, double x, int order) {
    auto s = eval_net_at(e, eps, {x}, cfg(), order);
    std::vector<double> out;
    for (const auto& r : s.rows) out.push_back(r[0] * std::exp(s.log_scale));
    return out;
}

std::vector<double> grid_points() {
    std::vector<double> x;
    for (double v = -6; v <= 6; v += 0.37) x.push_back(v);
    return x;
}

SmoothFn random_poly() {
    std::vector<double> c(std::size_t(fixture::uniform_int(1, 4)));
    for (double& v : c) v = fixture::uniform(-2, 2);
    return SmoothFn::polynomial(c);
}

SmoothFn random_fn() {
    switch (fixture::uniform_int(0, 3)) {
    case 0: return random_poly();
    case 1: return SmoothFn::sine(fixture::uniform(0.2, 3));
    case 2: return SmoothFn::gaussian(fixture::uniform(0.2, 2));
    default: return SmoothFn::erf_step();
    }
}

} // namespace

TEST_CASE("constant nets") {
    auto e = net("embed(poly(0,0,1))");
    for (double x : {-1.5, 0.0, 0.25, 3.0}) {
        auto r = at(e, 0.01, x, 3);
        CHECK(r[0] == x * x);
        CHECK(r[1] == 2 * x);
        CHECK(r[2] == 2.0);
        CHECK(r[3] == 0.0);
    }
}

TEST_CASE("drifting bump") {
    auto e = net("drift(bump(0,1), sqrtlog)");
    double eps = std::exp(-4.0);
    CHECK(at(e, eps, 2.0, 0)[0] == doctest::Approx(1.0));
    CHECK(at(e, eps, 0.9, 0)[0] == 0.0);
    CHECK(at(net("drift(bump(0,1), const(-1.5))"), 0.5, -1.5, 0)[0] == doctest::Approx(1.0));
}

TEST_CASE("square of the mollified delta") {
    auto e = net("mul(mollify(delta), mollify(delta))");
    double rho0 = fixture::rho()->value(0.0);
    for (double eps : {0.25, 1.0 / 64, 1.0 / 1024}) {
        auto s = eval_net(e, eps, cfg(), 0);
        double peak = 0.0;
        for (double v : s.rows[0]) peak = std::max(peak, v);
        CHECK(peak * std::exp(s.log_scale) == doctest::Approx(rho0 * rho0 / (eps * eps)).epsilon(0.01));
    }
}

TEST_CASE("restriction") {
    auto r = restrict(net("embed(poly(0,0,1))"), -1, 1);
    auto s = eval_net(r, 0.1, cfg(), 0);
    CHECK(seminorm(s, SeminormSpec::compact(-1, 1, 0)).value() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.x.front() >= -1.0);
    CHECK(s.x.back() <= 1.0);

    auto d = restrict(net("drift(bump(0,1), sqrtlog)"), -1, 1);
    auto z = eval_net(d, std::exp(-9.0), cfg(), 2);
    for (const auto& row : z.rows)
        for (double v : row) CHECK(v == 0.0);

    CHECK_THROWS_AS(restrict(net("embed(one)"), 1, 1), InvalidArgument);
    CHECK_THROWS_AS(net("restrict(embed(one), 2, 1)"), ParseError);
}

TEST_CASE("seminorm sweeps") {
    auto g = default_grid();
    auto gauss = SeminormSpec::schwartz(TestFunction::gaussian(1.0), 0);
    CHECK(std::abs(estimate_order(seminorm_sweep(net("embed(sin)"), gauss, g, cfg())).slope) <= 0.01);
    CHECK(estimate_order(seminorm_sweep(net("scale(pow(3), embed(one))"), gauss, g, cfg())).slope ==
          doctest::Approx(3.0).epsilon(0.01 / 3));
    auto d = seminorm_sweep(net("drift(bump(0,1), sqrtlog)"), gauss, g, cfg());
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.value(i) >= d.eps(i));
}

TEST_CASE("property: homomorphism and Leibniz at fixed eps") {
    auto x = grid_points();
    for (int t = 0; t < 60; ++t) {
        auto f = random_fn(), g = random_fn();
        double eps = std::ldexp(1.0, -fixture::uniform_int(1, 16));
        auto a = eval_net_at(embed(f), eps, x, cfg(), 2), b = eval_net_at(embed(g), eps, x, cfg(), 2);
        auto s = eval_net_at(add(embed(f), embed(g)), eps, x, cfg(), 2);
        auto m = eval_net_at(mul(embed(f), embed(g)), eps, x, cfg(), 2);
        auto ds = eval_net_at(derive(1, add(embed(f), embed(g))), eps, x, cfg(), 1);
        auto sd = eval_net_at(add(derive(1, embed(f)), derive(1, embed(g))), eps, x, cfg(), 1);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(std::abs(s.rows[0][i] - (a.rows[0][i] + b.rows[0][i])) <= 1e-12 * (1 + std::abs(s.rows[0][i])));
            CHECK(m.rows[0][i] == doctest::Approx(a.rows[0][i] * b.rows[0][i]).epsilon(1e-12));
            double lb = a.rows[1][i] * b.rows[0][i] + a.rows[0][i] * b.rows[1][i];
            CHECK(std::abs(m.rows[1][i] - lb) <= 1e-10 * (1 + std::abs(lb)));
            CHECK(ds.rows[0][i] == sd.rows[0][i]);
            CHECK(ds.rows[1][i] == sd.rows[1][i]);
        }
    }
}

TEST_CASE("property: slope additivity under products") {
    auto g = fixture::grid();
    auto spec = SeminormSpec::schwartz(TestFunction::gaussian(1.0), 1);
    for (int t = 0; t < 20; ++t) {
        double p = fixture::uniform(-5, 5), q = fixture::uniform(-5, 5);
        GeneralizedConstant cp{1.0, p}, cq{fixture::uniform(0.5, 2), q};
        auto e = mul(scale(cp, embed(random_fn())), scale(cq, embed(SmoothFn::gaussian(0.5))));
        CHECK(std::abs(estimate_order(seminorm_sweep(e, spec, g, cfg())).slope - (p + q)) <= 0.02);
    }
}

TEST_CASE("property: restriction never increases semi-norms") {
    auto lib = default_library();
    for (int t = 0; t < 25; ++t) {
        double lo = fixture::uniform(-5, 4), hi = lo + fixture::uniform(0.3, 4);
        auto e = fixture::uniform_int(0, 1) ? embed(random_fn()) : net("mollify(delta(1, 0.5))");
        double eps = std::ldexp(1.0, -fixture::uniform_int(2, 10));
        auto whole = eval_net(e, eps, cfg(), 2);
        auto part = eval_net(restrict(e, lo, hi), eps, cfg(), 2);
        for (const auto& phi : lib)
            for (int l = 0; l <= 2; ++l) {
                auto spec = SeminormSpec::schwartz(phi, l);
                CHECK(seminorm(part, spec).log_value <= seminorm(whole, spec).log_value + 1e-12);
            }
    }
}

TEST_CASE("parser") {
    for (const char* s : {"mul(mollify(delta), mollify(delta))", "drift(bump(0,1), sqrtlog)",
                          "scale(pow(3), embed(one))", "sub(mollify(delta(2, -1)), derive(2, mollify(delta(0,-1))))",
                          "scale(exp(-1)*pow(2)*logpow(1), embed(sin(2, 0.5)))", "restrict(mollify(heaviside(1)), 0, 2)",
                          "fourier(embed(gauss))", "defect(sin)", "x", "poly(1,0,3)"}) {
        auto e = net(s);
        CHECK(net(e.to_string()).to_string() == e.to_string());
    }
    auto pos = [](const char* s) {
        try {
            net(s);
        } catch (const ParseError& e) {
            return int(e.position);
        }
        return -1;
    };
    CHECK(pos("mul(embed(one)") == 14);
    CHECK(pos("embed(one) x") == 11);
    CHECK(pos("derive(1.5, x)") == 7);
    CHECK(pos("embed(exp)") == 6);
    CHECK(pos("drift(x, wobble)") == 9);
    CHECK(pos("derive(9, x)") == 0);
    CHECK_THROWS_AS(parse_net("mollify(delta)", ParseContext{}), ParseError);
}

TEST_CASE("depth and domain errors") {
    CHECK_THROWS_AS(derive(9, net("x")), InvalidArgument);
    CHECK_THROWS(eval_net(net("x"), 1.5, cfg(), 0));
    auto far = drift(net("bump(0,1)"), DriftLaw{DriftLaw::constant, 39.5});
    CHECK_THROWS(eval_net(far, 0.5, cfg(), 0));
}
