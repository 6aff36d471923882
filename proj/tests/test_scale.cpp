#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "gtau/error.hpp"
#include "gtau/scale.hpp"

#include <cmath>

using namespace gtau;

namespace {

ScalarNetSamples power(const EpsilonGrid& g, double a, double c = 1.0) {
    std::vector<double> l;
    for (double e : g.values) l.push_back(std::log(c) + a * std::log(e));
    return ScalarNetSamples(g.values, l);
}

} // namespace

TEST_CASE("grid construction") {
    auto g = make_epsilon_grid(2, 4, 20);
    CHECK(g.size() == 17);
    CHECK(g.values.front() == 0.0625);
    CHECK(g.values.back() == std::ldexp(1.0, -20));
    auto t = make_epsilon_grid(10, 1, 6);
    CHECK(t.values.front() == doctest::Approx(0.1));
    CHECK(t.values.back() == doctest::Approx(1e-6));
    CHECK_THROWS_AS(make_epsilon_grid(1.0, 4, 20), InvalidArgument);
    CHECK_THROWS_AS(make_epsilon_grid(2.0, 4, 8), InvalidArgument);
}

TEST_CASE("power laws") {
    auto g = default_grid();
    auto e = estimate_order(power(g, -3.0));
    CHECK(e.slope == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(e.sharp_value == doctest::Approx(std::exp(3.0)));
    CHECK(e.residual < 1e-9);

    std::vector<double> l;
    for (double x : g.values) l.push_back(-1.0 / x);
    auto s = ScalarNetSamples(g.values, l);
    auto es = estimate_order(s);
    CHECK(es.slope > 20.0);
    CHECK(es.sharp_value < 1e-6);
    CHECK(classify_scalar_net(s).negligible());
}

TEST_CASE("sharp values") {
    auto g = default_grid();
    CHECK(sharp_distance(ScalarNetSamples(g.values, std::vector<double>(g.size(), -INFINITY))) == 0.0);
    CHECK(sharp_distance(power(g, 1.0)) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    // the limsup proxy over the tail: 5^{1/|ln eps|} at the earliest tail point
    auto deep = make_epsilon_grid(2, 4, 140);
    CHECK(sharp_distance(power(deep, 0.0, 5.0)) == doctest::Approx(std::pow(5.0, 1.0 / (72 * std::log(2.0)))));
    CHECK(sharp_distance(power(deep, 0.0, 5.0)) < 1.05);
    for (int t = 0; t < 50; ++t) {
        double a = fixture::uniform(-6.0, 6.0);
        CHECK(sharp_distance(power(g, a)) == doctest::Approx(std::exp(-a)).epsilon(1e-9));
    }
}

TEST_CASE("classification thresholds") {
    auto g = default_grid();
    auto c2 = classify_scalar_net(power(g, 2.0));
    CHECK(c2.verdict == Verdict::moderate);
    auto cm = classify_scalar_net(power(g, -1.0));
    CHECK(cm.verdict == Verdict::moderate);
    CHECK(cm.witness_order == doctest::Approx(-1.0));
    CHECK(classify_scalar_net(power(g, -25.0)).verdict == Verdict::neither);
    CHECK(classify_scalar_net(power(g, 9.0)).verdict == Verdict::negligible);
    CHECK_THROWS_AS(classify_scalar_net(power(g, 1.0), {20.0, -1.0, 0.05}), InvalidArgument);
}

TEST_CASE("degenerate tail") {
    auto g = default_grid();
    std::vector<double> l(g.size(), -INFINITY);
    l[g.size() - 1] = 0.0;
    CHECK_THROWS_AS(estimate_order(ScalarNetSamples(g.values, l)), DegenerateFit);
}

TEST_CASE("property: scale invariance of verdicts") {
    auto g = default_grid();
    for (int t = 0; t < 200; ++t) {
        double a = fixture::uniform(-30.0, 30.0), c = std::exp(fixture::uniform(-20.0, 20.0));
        auto v = classify_scalar_net(power(g, a));
        auto w = classify_scalar_net(power(g, a).scaled(c));
        CHECK(v.verdict == w.verdict);
        CHECK(v.witness_order == doctest::Approx(w.witness_order).epsilon(1e-9));
    }
}

TEST_CASE("property: product slopes add") {
    auto g = default_grid();
    for (int t = 0; t < 200; ++t) {
        double a = fixture::uniform(-10.0, 10.0), b = fixture::uniform(-10.0, 10.0);
        auto p = estimate_order(multiply(power(g, a, 3.0), power(g, b, 0.5)));
        CHECK(std::abs(p.slope - (a + b)) <= 2 * 0.05);
    }
}

TEST_CASE("property: ultrametric on power-law differences") {
    auto g = default_grid();
    for (int t = 0; t < 200; ++t) {
        double a = fixture::uniform(0, 5), b = fixture::uniform(0, 5), c = fixture::uniform(0, 5);
        // disjointly supported members: |f - g| sup is the larger of the two
        auto d = [&](double x, double y) { return sharp_distance(pointwise_max(power(g, x), power(g, y))); };
        CHECK(d(a, c) <= std::max(d(a, b), d(b, c)) + 1e-9);
    }
}

TEST_CASE("csv round trip and huge magnitudes") {
    auto g = default_grid();
    std::vector<double> l;
    for (double e : g.values) l.push_back(1.0 / e);
    ScalarNetSamples s(g.values, l);
    auto back = ScalarNetSamples::from_csv(s.to_csv());
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(back.log_value(i) == doctest::Approx(s.log_value(i)).epsilon(1e-12));
    CHECK(s.to_csv().rfind("eps,value\n", 0) == 0);
}

TEST_CASE("generalized constants") {
    GeneralizedConstant c{2.0, 3.0, -1.0, 1.0};
    double e = 0.01;
    CHECK(c.log_abs(e) == doctest::Approx(std::log(2.0) + 3 * std::log(e) - 1 / e + std::log(std::abs(std::log(e)))));
    auto p = c * GeneralizedConstant{-1.0, 1.0, 0.0, 0.0};
    CHECK(p.sign() < 0);
    CHECK(p.eps_power == 4.0);
    CHECK(GeneralizedConstant{0.0}.log_abs(0.5) == -INFINITY);
}
