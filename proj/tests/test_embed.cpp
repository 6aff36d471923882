#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "gtau/embed.hpp"
#include "gtau/error.hpp"

#include <algorithm>
#include <cmath>

using namespace gtau;
using fixture::cfg;
using fixture::rho;

namespace {

SampledFunction at(const NetExpr& e, double eps, const std::vector<double>& x, int order) {
    auto s = eval_net_at(e, eps, x, cfg(), order);
    for (auto& r : s.rows)
        for (double& v : r) v *= std::exp(s.log_scale);
    s.log_scale = 0;
    return s;
}

// points dense enough for every eps used here
std::vector<double> points(double eps, double lo = -3, double hi = 3) {
    std::vector<double> x;
    for (double v = lo; v <= hi + 1e-12; v += eps / 64) x.push_back(v);
    return x;
}

double value_at(const SampledFunction& s, double x, int k = 0) {
    auto it = std::lower_bound(s.x.begin(), s.x.end(), x - 1e-12);
    REQUIRE(it != s.x.end());
    REQUIRE(std::abs(*it - x) <= 1e-12);
    return s.rows[std::size_t(k)][std::size_t(it - s.x.begin())];
}

double sup_diff(const SampledFunction& a, const SampledFunction& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.rows.size(); ++k)
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.rows[k][i] - b.rows[k][i]));
    return m;
}

} // namespace

TEST_CASE("sigma") {
    CHECK_THROWS_AS(sigma_tau("exp"), InvalidArgument);
    CHECK_THROWS_AS(sigma_tau("cosh"), InvalidArgument);
    auto lib = default_library();
    auto rep = is_moderate(sigma_tau("x2"), lib, fixture::grid(), cfg());
    CHECK(rep.moderate);
    for (const auto& r : rep.rows) CHECK(std::abs(r.estimate.slope) <= 1e-9);

    auto x = points(1.0 / 16);
    auto f = SmoothFn::polynomial({1, -2, 0.5}), g = SmoothFn::polynomial({0, 3, 0, 1});
    auto d = sub(sigma_tau(product(f, g)), mul(sigma_tau(f), sigma_tau(g)));
    CHECK(sup_diff(at(d, 0.01, x, 3), at(scale({0.0}, d), 0.01, x, 3)) <= 1e-10);
    CHECK(sup_diff(at(derive(1, sigma_tau("sin")), 0.1, x, 2), at(sigma_tau("cos"), 0.1, x, 2)) <= 1e-15);
}

TEST_CASE("iota on the catalog") {
    for (double eps : {0.5, 1.0 / 32, 1.0 / 1024}) {
        auto v = at(iota_tau(DeltaDerivative{0, 0.0}, rho()), eps, points(eps, -1, 1), 0);
        CHECK(value_at(v, 0.0) == doctest::Approx(rho()->value(0.0) / eps).epsilon(1e-13));
    }
    auto x3 = at(iota_tau(PolynomialDist{{0, 0, 0, 1}}, rho()), 0.01, {-2.0, 0.3, 1.7}, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        double xi = x3.x[i];
        CHECK(x3.rows[0][i] == doctest::Approx(xi * xi * xi).epsilon(1e-12));
        CHECK(x3.rows[1][i] == doctest::Approx(3 * xi * xi).epsilon(1e-12));
        CHECK(x3.rows[3][i] == doctest::Approx(6.0).epsilon(1e-12));
    }
    auto h = at(iota_tau(Heaviside{0.0}, rho()), std::ldexp(1.0, -8), points(std::ldexp(1.0, -8)), 1);
    CHECK(std::abs(value_at(h, 3.0) - 1.0) <= 1e-9);
    CHECK(std::abs(value_at(h, -3.0)) <= 1e-9);
    CHECK(std::abs(value_at(h, 3.0, 1)) <= 1e-9);
}

TEST_CASE("property: linearity of iota per slice") {
    auto pick = [] {
        switch (fixture::uniform_int(0, 2)) {
        case 0: return DistributionDesc{DeltaDerivative{fixture::uniform_int(0, 3), fixture::uniform(-2, 2)}};
        case 1: return DistributionDesc{Heaviside{fixture::uniform(-2, 2)}};
        default: return DistributionDesc{PolynomialDist{{fixture::uniform(-1, 1), fixture::uniform(-1, 1)}}};
        }
    };
    for (int t = 0; t < 40; ++t) {
        auto a = iota_tau(pick(), rho()), b = iota_tau(pick(), rho());
        double c = fixture::uniform(-3, 3);
        double eps = std::ldexp(1.0, -fixture::uniform_int(2, 9));
        auto x = points(eps);
        auto lhs = at(add(a, scale({c}, b)), eps, x, 2);
        auto A = at(a, eps, x, 2), B = at(b, eps, x, 2);
        double worst = 0.0;
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t i = 0; i < x.size(); ++i) {
                double want = A.rows[k][i] + c * B.rows[k][i];
                worst = std::max(worst, std::abs(lhs.rows[k][i] - want) / (1 + std::abs(want)));
            }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("property: derivative of a mollified delta") {
    for (int t = 0; t < 30; ++t) {
        int k = fixture::uniform_int(0, 5);
        double c = fixture::uniform(-2, 2), eps = std::ldexp(1.0, -fixture::uniform_int(1, 10));
        auto x = points(eps);
        auto lhs = at(derive(1, iota_tau(DeltaDerivative{k, c}, rho())), eps, x, 1);
        auto rhs = at(iota_tau(DeltaDerivative{k + 1, c}, rho()), eps, x, 1);
        CHECK(sup_diff(lhs, rhs) == 0.0);
    }
}

TEST_CASE("commutativity defects") {
    auto g = defect_grid();
    CHECK(g.size() == 13);
    auto spec = SeminormSpec::schwartz(TestFunction::gaussian(1.0), 0);
    auto one = defect_sweep(smooth_catalog("one"), rho(), spec, g, cfg());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one.is_zero(i));
    auto x3 = defect_sweep(smooth_catalog("x3"), rho(), spec, g, cfg());
    for (std::size_t i = 0; i < x3.size(); ++i) CHECK(x3.value(i) <= 1e-8);
    auto sine = commutativity_defect(smooth_catalog("sin"), rho(), spec, g, cfg());
    CHECK(sine.slope >= 8.0);

    // every catalog function against every default spec
    for (const char* f : {"one", "x", "x2", "x3", "sin", "cos", "gauss", "erf"})
        for (const auto& phi : default_library())
            for (int l = 0; l <= 2; ++l) {
                auto e = commutativity_defect(smooth_catalog(f), rho(), SeminormSpec::schwartz(phi, l), g, cfg());
                CHECK_MESSAGE(classify_estimate(e, {}).negligible(), f, " ", phi.id(), " l=", l);
            }
}

TEST_CASE("products of embedded smooth functions") {
    auto lib = default_library();
    for (auto [a, b] : {std::pair{"sin", "x2"}, std::pair{"gauss", "cos"}}) {
        auto f = SmoothOM{smooth_catalog(a)}, g = SmoothOM{smooth_catalog(b)};
        auto fg = mul(embed(smooth_catalog(a)), embed(smooth_catalog(b)));
        auto d = sub(mul(iota_tau(f, rho()), iota_tau(g, rho())), fg);
        CHECK(is_negligible(d, lib, defect_grid(), cfg()).negligible);
    }
}

TEST_CASE("reduced negligibility inputs") {
    auto [o0, full] = reduced_negligibility_inputs(defect(smooth_catalog("sin"), rho()), default_library(),
                                                   defect_grid(), cfg());
    CHECK(o0.negligible);
    CHECK(full.moderate);
    for (const auto& r : o0.rows) CHECK(r.l == 0);
}
