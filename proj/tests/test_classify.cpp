#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "gtau/classify.hpp"
#include "gtau/embed.hpp"
#include "gtau/error.hpp"

#include <cmath>

using namespace gtau;
using fixture::cfg;
using fixture::net;

namespace {

const std::vector<TestFunction>& lib() {
    static auto l = default_library();
    return l;
}

} // namespace

TEST_CASE("moderateness") {
    auto g = fixture::grid();
    auto x2 = is_moderate(net("embed(x2)"), lib(), g, cfg());
    CHECK(x2.moderate);
    CHECK_FALSE(x2.negligible);
    CHECK(x2.rows.size() == lib().size() * 4);

    auto d = is_moderate(net("mollify(delta)"), lib(), default_grid(), cfg());
    CHECK(d.moderate);
    for (const auto& r : d.rows)
        if (r.param == TestFunction::gaussian(1.0).id()) CHECK(r.estimate.slope == doctest::Approx(-1.0 - r.l).epsilon(0.1 / (1 + r.l)));

    CHECK_FALSE(is_moderate(net("scale(exp(1), embed(one))"), lib(), g, cfg()).moderate);
    CHECK(is_moderate(net("embed(one)"), lib(), g, cfg()).to_csv().rfind("family,param,l,q,slope,sharp,residual,verdict,truncated\n", 0) == 0);
    CHECK_THROWS_AS(nu_specs({}, 2), InvalidArgument);
}

TEST_CASE("negligibility") {
    auto g = fixture::grid();
    CHECK(is_negligible(net("sub(embed(poly(0,1,1)), mul(embed(x), embed(poly(1,1))))"), lib(), g, cfg()).negligible);
    CHECK(is_negligible(net("defect(sin)"), lib(), defect_grid(), cfg()).negligible);
    auto drift = is_negligible(net("drift(bump(0,1), sqrtlog)"), lib(), default_grid(), cfg());
    CHECK_FALSE(drift.negligible);
    for (const auto& r : drift.rows)
        if (r.param == TestFunction::gaussian(1.0).id() && r.l == 0) CHECK(r.estimate.slope == doctest::Approx(1.0).epsilon(0.5));
}

TEST_CASE("equivalence of the two definitions") {
    auto g = fixture::grid();
    for (const char* s : {"embed(x2)", "mollify(delta)", "drift(bump(0,1), sqrtlog)"}) {
        auto r = tau_equivalence_check(net(s), lib(), g, cfg());
        CHECK_MESSAGE(r.agree, s);
        CHECK(r.nu.moderate);
        CHECK(r.weighted.definition_used == Definition::weighted_global);
    }
    auto w = weighted_classify(net("embed(x2)"), g, cfg());
    CHECK(w.moderate);
    bool found = false;
    for (const auto& n : w.notes) found = found || n.rfind("l=0: moderate q=", 0) == 0;
    CHECK(found);
    CHECK_FALSE(tau_equivalence_check(net("scale(exp(1), embed(one))"), lib(), g, cfg()).nu.moderate);
}

TEST_CASE("regularity") {
    auto g = fixture::grid();
    auto s = is_ginfty(net("embed(sin)"), lib(), g, cfg());
    CHECK(s.g_infinity);
    CHECK(s.uniform_m == doctest::Approx(0.0).epsilon(0.01));
    for (double m : ginfty_profile(s, "schwartz", lib()[0].id())) CHECK(std::abs(m) <= 1e-6);

    auto d = is_ginfty(net("mollify(delta)"), lib(), default_grid(), cfg());
    CHECK(d.moderate);
    CHECK_FALSE(d.g_infinity);
    auto prof = ginfty_profile(d, "schwartz", lib()[0].id());
    REQUIRE(prof.size() == 4);
    for (std::size_t l = 1; l < prof.size(); ++l) CHECK(prof[l] > prof[l - 1] + 0.5);

    CHECK(is_ginfty(net("mollify(poly(0,0,0,1))"), lib(), g, cfg()).g_infinity);
}

TEST_CASE("reduced negligibility") {
    auto r = reduced_negligibility(net("defect(sin)"), lib(), defect_grid(), cfg());
    CHECK(r.verdict);
    CHECK(r.direct.negligible);
    CHECK_FALSE(r.finite_order);
    CHECK_FALSE(reduced_negligibility(net("mollify(delta)"), lib(), fixture::grid(), cfg()).verdict);
    auto z = reduced_negligibility(net("sub(embed(sin), embed(sin))"), lib(), fixture::grid(), cfg());
    CHECK(z.verdict);
    auto p = reduced_negligibility(net("scale(pow(10), embed(one))"), lib(), fixture::grid(), cfg());
    CHECK(p.finite_order);
    auto e = reduced_negligibility(net("scale(exp(-1), embed(osc(1)))"), lib(), fixture::grid(), cfg());
    CHECK(e.verdict);
    CHECK_FALSE(e.finite_order);
}

TEST_CASE("singular support") {
    std::vector<double> probes{-2.5, -1.5, -0.5, 0.5, 1.5, 2.5};
    auto g = fixture::grid();
    auto h = singular_support(net("mollify(heaviside)"), Sharpness::tau_infinity, probes, 0.6, lib(), g, cfg());
    CHECK(h.singular_probes() == std::vector<double>{-0.5, 0.5});
    CHECK(h.to_csv().rfind("probe,lo,hi,verdict\n", 0) == 0);
    for (auto sharp : {Sharpness::tau, Sharpness::tau_infinity})
        CHECK(singular_support(net("embed(x2)"), sharp, probes, 0.6, lib(), g, cfg()).singular_probes().empty());
    // tau sees only the growth: the mollified step is moderate everywhere
    CHECK(singular_support(net("mollify(heaviside)"), Sharpness::tau, probes, 0.6, lib(), g, cfg()).singular_probes().empty());
    auto ds = singular_support(net("add(mollify(delta), embed(sin))"), Sharpness::tau_infinity, probes, 0.6, lib(), g, cfg());
    CHECK(ds.singular_probes() == std::vector<double>{-0.5, 0.5});
    CHECK_THROWS_AS(singular_support(net("x"), Sharpness::tau, {39.9}, 0.5, lib(), g, cfg()), InvalidArgument);
    CHECK_THROWS_AS(singular_support(net("x"), Sharpness::tau, {0.0}, 0.0, lib(), g, cfg()), InvalidArgument);
}

TEST_CASE("property: ideal and inclusion chains over catalog pairs") {
    auto g = fixture::grid();
    const std::vector<const char*> negl = {"defect(sin)", "scale(exp(-1), embed(gauss))", "sub(embed(x), embed(x))"};
    const std::vector<const char*> mod = {"embed(x2)", "mollify(delta)", "embed(sin)", "scale(pow(-2), embed(gauss))",
                                          "drift(bump(0,1), sqrtlog)"};
    for (int t = 0; t < 8; ++t) {
        auto a = net(negl[std::size_t(fixture::uniform_int(0, int(negl.size()) - 1))]);
        auto b = net(mod[std::size_t(fixture::uniform_int(0, int(mod.size()) - 1))]);
        auto ra = is_negligible(a, lib(), g, cfg()), rb = is_moderate(b, lib(), g, cfg());
        REQUIRE(ra.negligible);
        REQUIRE(rb.moderate);
        auto p = is_negligible(mul(a, b), lib(), g, cfg());
        CHECK_MESSAGE(p.negligible, a.to_string(), " * ", b.to_string());
        CHECK(p.moderate);
        auto gi = is_ginfty(b, lib(), g, cfg());
        if (gi.g_infinity) CHECK(gi.moderate);
    }
}
