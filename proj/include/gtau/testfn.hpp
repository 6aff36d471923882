#pragma once

#include "gtau/jet.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gtau {

double japanese_bracket(double x);

struct GaussianFn {
    double a = 1.0;
    std::vector<double> poly{1.0}; // P(x) = sum poly[k] x^k
};

struct BumpFn {
    double center = 0.0;
    double radius = 1.0;
};

struct CombFn {
    std::vector<double> centers;
    std::vector<int> exponents;
    double radius = 1.0; // theta = bump(0, radius)
};

// exp(1 - 1/(1 - s^2)) on |s| < 1, zero outside; value 1 at s = 0
Jet bump_profile(const Jet& s);
// smooth step, 0 for t <= 0 and 1 for t >= 1
Jet smooth_step(const Jet& t);
// smooth cutoff supported in (a, b), equal to 1 on the middle half
Jet interval_cutoff(const Jet& x, double a, double b);

class TestFunction {
public:
    using Desc = std::variant<GaussianFn, BumpFn, CombFn>;

    static TestFunction gaussian(double a, std::vector<double> poly = {1.0});
    static TestFunction bump(double center, double radius);

    const Desc& desc() const { return desc_; }
    bool is_gaussian() const { return std::holds_alternative<GaussianFn>(desc_); }

    Jet jet(double x, int order) const;
    double operator()(double x) const { return jet(x, 0).value(); }
    std::string id() const;

private:
    friend TestFunction comb_testfn(std::vector<double>, std::vector<int>, double);
    explicit TestFunction(Desc d) : desc_(std::move(d)) {}
    Desc desc_;
};

TestFunction comb_testfn(std::vector<double> centers, std::vector<int> exponents,
                         double theta_radius = 1.0);

constexpr int kTestFnMaxOrder = 12;

// rows[k][i] = d^k phi(points[i])
std::vector<std::vector<double>> eval_testfn(const TestFunction& phi,
                                             const std::vector<double>& points, int max_order);

struct Domination {
    TestFunction psi;
    double C;
};

// nu_{phi,l}(fg) <= C nu_{psi,l}(f) nu_{psi,l}(g)
Domination dominating_schwartz(const TestFunction& phi, int l);

// {e^{-x^2}, e^{-x^2/2}, x^2 e^{-x^2}, bump(0,1), comb at 2q with exponent q}
std::vector<TestFunction> default_library();
std::vector<TestFunction> parse_library(std::string_view text);
std::vector<TestFunction> load_library(const std::string& path);

struct SampledFunction {
    std::vector<double> x;                 // sorted, strictly increasing
    std::vector<std::vector<double>> rows; // derivative k at x[i], times exp(-log_scale)
    double log_scale = 0.0;
    double lo = 0.0, hi = 0.0; // closed evaluation domain
    bool restricted = false;   // proper subinterval: schwartz family gets a cutoff
    double radius = 0.0;       // truncation radius of the parent grid

    int max_order() const { return int(rows.size()) - 1; }
    std::size_t size() const { return x.size(); }
};

// trapezoid weights on sorted nonuniform points
std::vector<double> trapezoid_weights(const std::vector<double>& x);

struct CompactSpec {
    double k0, k1;
    int l;
};
struct WeightedSpec {
    int r;
    int l;
};
struct SchwartzSpec {
    TestFunction phi;
    int l;
};
struct SobolevSpec {
    int m;
};

struct SeminormSpec {
    std::variant<CompactSpec, WeightedSpec, SchwartzSpec, SobolevSpec> family;

    static SeminormSpec compact(double k0, double k1, int l);
    static SeminormSpec weighted(int r, int l);
    static SeminormSpec schwartz(TestFunction phi, int l);
    static SeminormSpec sobolev(int m);

    int order() const;
    std::string family_name() const;
    std::string param() const;
};

struct SeminormValue {
    double log_value;
    bool truncated = false;
    double value() const;
};

SeminormValue seminorm(const SampledFunction& f, const SeminormSpec& spec);

// CSV family,param,l,value
std::string seminorm_report_csv(const SampledFunction& f, const std::vector<SeminormSpec>& specs);

} // namespace gtau
