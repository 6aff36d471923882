#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "gtau/embed.hpp"
#include "gtau/error.hpp"
#include "gtau/fourier.hpp"

#include <cmath>
#include <numbers>

using namespace gtau;
using std::numbers::pi;

namespace {

const EvalConfig& fc() {
    static EvalConfig c = fourier_config();
    return c;
}
std::shared_ptr<const Mollifier> frho() {
    static auto r = std::make_shared<const Mollifier>(build_mollifier(8, 24, fc()));
    return r;
}
NetExpr fnet(const std::string& s) { return parse_net(s, ParseContext{frho()}); }

EvalConfig small() {
    EvalConfig c;
    c.R = 40;
    c.N = 4096;
    return c;
}

std::vector<Complex> samples(const SpectralGrid& g, auto&& f) {
    std::vector<Complex> v(g.N);
    for (std::size_t j = 0; j < g.N; ++j) v[j] = f(g.x(j));
    return v;
}

double sup_abs(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("grids") {
    auto g = spectral_grid(fc());
    CHECK(g.N == (1u << 17));
    CHECK(g.x(0) == -40.0);
    CHECK(g.xi(g.N / 2) == 0.0);
    CHECK(g.dxi == doctest::Approx(2 * pi / 80));
    auto e = fourier_grid();
    CHECK(e.values.front() == 0.5);
    CHECK(e.values.back() == 1.0 / 64);
}

TEST_CASE("gaussian transform and Parseval") {
    auto g = spectral_grid(small());
    for (double a : {0.3, 1.0, 4.0}) {
        auto f = samples(g, [&](double x) { return std::exp(-a * x * x); });
        auto F = forward_transform(f, g);
        double worst = 0, n2 = 0, N2 = 0;
        for (std::size_t k = 0; k < g.N; ++k) {
            double xi = g.xi(k);
            worst = std::max(worst, std::abs(F[k] - std::sqrt(pi / a) * std::exp(-xi * xi / (4 * a))));
            n2 += g.h * std::norm(f[k]);
            N2 += g.dxi * std::norm(F[k]);
        }
        CHECK(worst <= 1e-12);
        CHECK(std::abs(n2 - N2 / (2 * pi)) <= 1e-8 * n2);
        CHECK(sup_abs(inverse_transform(F, g), f) <= 1e-13);
    }
}

TEST_CASE("property: round trip and exchange formulas on random gaussian packets") {
    auto g = spectral_grid(small());
    for (int t = 0; t < 40; ++t) {
        double a = fixture::uniform(0.3, 3), c = fixture::uniform(-5, 5), w = fixture::uniform(-4, 4);
        auto u = [&](double x) { return std::exp(-a * (x - c) * (x - c)) * std::polar(1.0, w * x); };
        auto du = [&](double x) { return (-2 * a * (x - c) + Complex(0, w)) * u(x); };
        auto f = samples(g, u);
        auto F = forward_transform(f, g);
        CHECK(sup_abs(inverse_transform(F, g), f) <= 1e-12);
        auto D = forward_transform(samples(g, du), g);
        auto X = forward_transform(samples(g, [&](double x) { return x * u(x); }), g);
        auto dF = spectral_xi_derivative(F, g);
        double e1 = 0, e2 = 0;
        for (std::size_t k = 0; k < g.N; ++k) {
            e1 = std::max(e1, std::abs(D[k] - Complex(0, g.xi(k)) * F[k]));
            e2 = std::max(e2, std::abs(X[k] - Complex(0, 1) * dF[k]));
        }
        CHECK(e1 <= 1e-6);
        CHECK(e2 <= 1e-6);
    }
}

TEST_CASE("fourier net of the mollified delta") {
    auto T = fourier_net(fnet("mollify(delta)"), fourier_grid(), fc());
    REQUIRE(T.slices.size() == 6);
    double worst = 0;
    for (std::size_t i = 0; i < T.slices.size(); ++i) {
        CHECK(std::abs(T.value(i, T.spec.N / 2) - 1.0) <= 1e-12);
        for (std::size_t k = 0; k < T.spec.N; k += 61)
            worst = std::max(worst, std::abs(T.value(i, k) - frho()->spectrum(T.grid.values[i] * T.spec.xi(k))));
    }
    CHECK(worst <= 1e-10);

    auto inv = inv_fourier_net(T, 1);
    for (std::size_t i = 0; i < inv.slices.size(); ++i) {
        const auto& s = inv.slices[i];
        double peak = 0;
        for (double v : s.rows[0]) peak = std::max(peak, v * std::exp(s.log_scale));
        CHECK(peak == doctest::Approx(frho()->value(0) / inv.grid.values[i]).epsilon(1e-3));
    }
}

TEST_CASE("zero and blown-up nets") {
    auto Z = fourier_net(fnet("sub(embed(gauss), embed(gauss))"), fourier_grid(), fc());
    for (std::size_t i = 0; i < Z.slices.size(); ++i)
        for (std::size_t k = 0; k < Z.spec.N; k += 101) CHECK(Z.value(i, k) == 0.0);
    auto zi = inv_fourier_net(Z, 0);
    for (const auto& s : zi.slices)
        for (double v : s.rows[0]) CHECK(v == 0.0);

    auto lib = default_library();
    auto T = fourier_net(fnet("mollify(delta)"), fourier_grid(), fc());
    CHECK(is_rapidly_decreasing_gdist(T, lib).moderate);
    CHECK_FALSE(is_rapidly_decreasing_gdist(T.scaled({1.0, 0.0, 1.0}), lib).moderate);
    auto X2 = is_rapidly_decreasing_gdist(fourier_net(fnet("embed(x2)"), fourier_grid(), fc()), lib);
    CHECK(X2.moderate);
    for (const auto& r : X2.rows) CHECK(std::abs(r.estimate.slope) <= 1e-6);
}

TEST_CASE("classical transform") {
    auto C = classical_fourier_tau(fnet("embed(one)"), frho(), fourier_grid(), fc());
    for (std::size_t i = 0; i < C.slices.size(); ++i) {
        double eps = C.grid.values[i], worst = 0, peak = 2 * pi * frho()->value(0) / eps;
        for (std::size_t k = 0; k < C.spec.N; ++k) {
            double want = 2 * pi * frho()->value(C.spec.xi(k) / eps) / eps;
            worst = std::max(worst, std::abs(C.value(i, k) - want));
        }
        CHECK(worst <= 1e-6 * peak);
    }
    auto e = fnet("mollify(delta)");
    auto d = spectral_difference(classical_fourier_tau(e, frho(), fourier_grid(), fc()), fourier_net(e, fourier_grid(), fc()));
    CHECK(classify_scalar_net(d).negligible());
}

TEST_CASE("iota_OC") {
    auto g = fourier_grid();
    auto one = iota_OC(PolynomialDist{{1.0}}, frho(), g, fc());
    for (std::size_t i = 0; i < one.slices.size(); ++i)
        for (std::size_t k = 0; k < one.spec.N; k += 97)
            CHECK(one.value(i, k) == frho()->spectrum(g.values[i] * one.spec.xi(k)));
    CHECK(is_rapidly_decreasing_gdist(one, default_library()).moderate);

    auto d = iota_OC(DeltaDerivative{0, 0.0}, frho(), g, fc());
    for (const auto& s : d.slices) {
        REQUIRE(s.deltas.size() == 1);
        CHECK(s.deltas[0].coeff == Complex(1.0));
    }
    auto a = d.sampled(0), b = d.sampled(5);
    CHECK(sup_abs(a, b) == 0.0);

    // diagram chase on the gaussian
    auto lhs = iota_OC(SmoothOM{SmoothFn::gaussian(0.25)}, frho(), g, fc(), std::sqrt(pi));
    auto rhs = fourier_net(iota_tau(SmoothOM{SmoothFn::gaussian(1.0)}, frho()), g, fc());
    CHECK(classify_scalar_net(spectral_difference(lhs, rhs)).negligible());
}

TEST_CASE("H^s type") {
    auto g = fourier_grid();
    auto d = hs_type_test(fnet("mollify(delta)"), -1, g, fc());
    CHECK(d.hs_type);
    auto gs = hs_type_test(fnet("embed(gauss)"), 2, g, fc());
    CHECK(gs.hs_type);
    CHECK(std::abs(gs.estimate.slope) <= 1e-9);
    auto big = hs_type_test(fnet("scale(pow(-30), embed(gauss))"), 0, g, fc());
    CHECK_FALSE(big.hs_type);
    CHECK(big.estimate.slope == doctest::Approx(-30).epsilon(1e-6));
}

TEST_CASE("round trip residual on the catalog") {
    for (const char* s : {"embed(gauss)", "mollify(delta)", "mollify(heaviside)", "embed(x2)", "embed(sin)"})
        for (double r : round_trip_residual(fnet(s), fourier_grid(), fc())) CHECK(r <= 1e-8);
}
