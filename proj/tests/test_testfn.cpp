#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "gtau/error.hpp"
#include "gtau/testfn.hpp"

#include <cmath>

using namespace gtau;

namespace {

SampledFunction sample(const std::vector<double>& x, int order, auto&& f) {
    SampledFunction s;
    s.x = x;
    s.rows.assign(std::size_t(order + 1), std::vector<double>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        Jet j = f(Jet::variable(x[i], order));
        for (int k = 0; k <= order; ++k) s.rows[std::size_t(k)][i] = j.derivative(k);
    }
    s.lo = x.front();
    s.hi = x.back();
    s.radius = std::max(-s.lo, s.hi);
    return s;
}

std::vector<double> line(double R, std::size_t N) {
    std::vector<double> x(N + 1);
    for (std::size_t i = 0; i <= N; ++i) x[i] = -R + 2 * R * double(i) / double(N);
    return x;
}

} // namespace

TEST_CASE("japanese bracket") {
    CHECK(japanese_bracket(0) == 1.0);
    CHECK(japanese_bracket(std::sqrt(3.0)) == doctest::Approx(2.0));
    CHECK(japanese_bracket(-3) == japanese_bracket(3));
}

TEST_CASE("closed-form test functions") {
    auto g = TestFunction::gaussian(1.0);
    auto rows = eval_testfn(g, {0.0, 0.7}, 2);
    CHECK(rows[0][0] == 1.0);
    CHECK(rows[2][0] == doctest::Approx(-2.0));
    CHECK(rows[2][1] == doctest::Approx((4 * 0.49 - 2) * std::exp(-0.49)));
    auto c = comb_testfn({0.0}, {0});
    CHECK(c(0.0) == 1.0);
    auto c2 = comb_testfn({0.0, 3.0}, {0, 1});
    CHECK(c2(3.0) == doctest::Approx(1.0 / std::sqrt(10.0)));
    CHECK_THROWS_AS(comb_testfn({0.0, 1.5}, {0, 1}), InvalidArgument);
    CHECK_THROWS(eval_testfn(g, {0.0}, kTestFnMaxOrder + 1));
    CHECK(TestFunction::bump(0, 1)(0.0) == 1.0);
    CHECK(TestFunction::bump(0, 1)(1.0) == 0.0);
}

TEST_CASE("seminorm oracles") {
    auto x = line(32, 1 << 14);
    auto one = sample(x, 1, [](Jet X) { return Jet::constant(1.0, X.order()); });
    CHECK(seminorm(one, SeminormSpec::schwartz(TestFunction::gaussian(1.0), 0)).value() == doctest::Approx(1.0));
    auto s = sample(line(10, 1 << 14), 0, [](Jet X) { return sin(X); });
    CHECK(std::abs(seminorm(s, SeminormSpec::weighted(0, 0)).value() - 1.0) <= 1e-6);
    auto sq = sample(x, 2, [](Jet X) { return X * X; });
    CHECK(seminorm(sq, SeminormSpec::schwartz(TestFunction::gaussian(1.0), 0)).value() ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(seminorm(sq, SeminormSpec::compact(-1, 1, 0)).value() == doctest::Approx(1.0));
    CHECK_THROWS_AS(seminorm(sq, SeminormSpec::weighted(0, 3)), DepthExceeded);
    CHECK_THROWS_AS(seminorm(sq, SeminormSpec::compact(50, 60, 0)), InvalidArgument);
    CHECK(seminorm(sq, SeminormSpec::weighted(0, 0)).truncated);
    auto csv = seminorm_report_csv(sq, {SeminormSpec::weighted(-2, 0)});
    CHECK(csv.rfind("family,param,l,value\n", 0) == 0);
}

TEST_CASE("property: seminorm axioms") {
    auto x = line(20, 4096);
    auto lib = default_library();
    for (int t = 0; t < 40; ++t) {
        double a = fixture::uniform(-2, 2), b = fixture::uniform(0.2, 3), c = fixture::uniform(-5, 5);
        auto f = sample(x, 2, [&](Jet X) { return sin(b * X) + a * Jet::constant(1.0, X.order()); });
        auto g = sample(x, 2, [&](Jet X) { return a * (X * X) * exp(-b * (X * X)); });
        auto sum = f;
        auto scaled = f;
        for (std::size_t k = 0; k < f.rows.size(); ++k)
            for (std::size_t i = 0; i < x.size(); ++i) {
                sum.rows[k][i] += g.rows[k][i];
                scaled.rows[k][i] *= c;
            }
        for (const auto& phi : lib) {
            for (int l = 0; l <= 2; ++l) {
                auto spec = SeminormSpec::schwartz(phi, l);
                double vf = seminorm(f, spec).value(), vg = seminorm(g, spec).value();
                CHECK(seminorm(sum, spec).value() <= vf + vg + 1e-12);
                CHECK(seminorm(scaled, spec).value() == doctest::Approx(std::abs(c) * vf).epsilon(1e-12));
                if (l > 0) CHECK(vf >= seminorm(f, SeminormSpec::schwartz(phi, l - 1)).value());
            }
        }
        // compact against gaussian weighting
        double mk = seminorm(f, SeminormSpec::compact(-1, 1, 1)).value();
        double nu = seminorm(f, SeminormSpec::schwartz(TestFunction::gaussian(1.0), 1)).value();
        CHECK(mk <= nu / std::exp(-1.0) + 1e-12);
    }
}

TEST_CASE("property: gaussian product domination") {
    auto x = line(20, 4096);
    for (int l = 0; l <= 2; ++l) {
        auto phi = TestFunction::gaussian(1.0);
        auto d = dominating_schwartz(phi, l);
        for (int t = 0; t < 100; ++t) {
            double p = fixture::uniform(-2, 2), q = fixture::uniform(0.1, 2), r = fixture::uniform(-3, 3);
            auto f = sample(x, l, [&](Jet X) { return p * X + exp(-q * (X * X)); });
            auto g = sample(x, l, [&](Jet X) { return r * (X * X) + Jet::constant(1.0, X.order()); });
            auto fg = sample(x, l, [&](Jet X) { return (p * X + exp(-q * (X * X))) * (r * (X * X) + Jet::constant(1.0, X.order())); });
            double lhs = seminorm(fg, SeminormSpec::schwartz(phi, l)).value();
            double rhs = d.C * seminorm(f, SeminormSpec::schwartz(d.psi, l)).value() *
                         seminorm(g, SeminormSpec::schwartz(d.psi, l)).value();
            CHECK(lhs <= rhs * (1 + 1e-12));
        }
    }
    auto x2 = dominating_schwartz(TestFunction::gaussian(1.0, {0.0, 0.0, 1.0}), 1);
    for (int t = 0; t < 50; ++t) {
        double p = fixture::uniform(-3, 3);
        auto f = sample(x, 1, [&](Jet X) { return sin(p * X); });
        auto ff = sample(x, 1, [&](Jet X) { return sin(p * X) * sin(p * X); });
        double lhs = seminorm(ff, SeminormSpec::schwartz(TestFunction::gaussian(1.0, {0.0, 0.0, 1.0}), 1)).value();
        double nf = seminorm(f, SeminormSpec::schwartz(x2.psi, 1)).value();
        CHECK(lhs <= x2.C * nf * nf * (1 + 1e-12));
    }
    auto d0 = dominating_schwartz(TestFunction::gaussian(1.0), 0);
    CHECK(d0.C >= 1.0);
    CHECK_THROWS_AS(dominating_schwartz(TestFunction::bump(0, 1), 0), Unsupported);
}

TEST_CASE("comb decays against every weight") {
    auto comb = default_library().back();
    for (int r = 0; r <= 6; ++r) {
        double prev = INFINITY;
        for (int q = r + 1; q <= 18; ++q) {
            double m = 0;
            for (double x = 2.0 * q - 1; x <= 2.0 * q + 1; x += 0.005)
                m = std::max(m, std::pow(japanese_bracket(x), r) * std::abs(comb(x)));
            CHECK(m < prev);
            prev = m;
        }
    }
}

TEST_CASE("library text") {
    auto lib = parse_library("gaussian a=0.5\nbump center=1 radius=2 # comment\n\ncomb count=3\n");
    REQUIRE(lib.size() == 3);
    CHECK(lib[0].id() == TestFunction::gaussian(0.5).id());
    CHECK(lib[1](1.0) == 1.0);
    CHECK_THROWS_AS(parse_library("wavelet a=1"), InvalidArgument);
    CHECK_THROWS_AS(parse_library(""), InvalidArgument);
    CHECK(default_library().size() == 5);
}
