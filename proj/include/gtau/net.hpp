#pragma once

#include "gtau/eval_config.hpp"
#include "gtau/jet.hpp"
#include "gtau/mollifier.hpp"
#include "gtau/scale.hpp"
#include "gtau/testfn.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gtau {

// slowly increasing catalog functions
enum class SmoothKind { polynomial, sine, cosine, gaussian, erf_step, bump };

struct SmoothFn {
    SmoothKind kind = SmoothKind::polynomial;
    std::vector<double> poly{1.0};
    double freq = 1.0;       // sin(freq eps^{-freq_power} x)
    double freq_power = 0.0;
    double rate = 1.0;       // e^{-rate x^2}
    double center = 0.0, radius = 1.0;

    static SmoothFn polynomial(std::vector<double> c);
    static SmoothFn sine(double w = 1.0, double p = 0.0);
    static SmoothFn cosine(double w = 1.0, double p = 0.0);
    static SmoothFn gaussian(double b = 1.0);
    static SmoothFn erf_step();
    static SmoothFn bump(double c = 0.0, double r = 1.0);

    double frequency(double eps) const;
    Jet jet(double x, int order, double eps) const;
    std::string to_string() const;
};

// catalog lookup by name; rejects functions outside O_M
SmoothFn smooth_catalog(std::string_view name);
SmoothFn product(const SmoothFn& f, const SmoothFn& g); // polynomial pairs only

struct DeltaDerivative {
    int k = 0;
    double center = 0.0;
};
struct Heaviside {
    double center = 0.0;
};
struct PolynomialDist {
    std::vector<double> coeffs;
};
struct SmoothOM {
    SmoothFn f;
};
struct SampledL2 {
    std::vector<double> values; // periodic grid x_j = -R + j h, j < N
    double R = 40.0;
};
using DistributionDesc = std::variant<DeltaDerivative, Heaviside, PolynomialDist, SmoothOM, SampledL2>;

std::string to_string(const DistributionDesc& d);

struct DriftLaw {
    enum Kind { sqrtlog, constant } kind = sqrtlog;
    double c = 0.0;
    double at(double eps) const;
    std::string to_string() const;
};

enum class NodeKind { embed, mollified, defect, add, mul, scale, derive, drift, restrict, fourier, inv_fourier };

constexpr int kMaxDerive = 8;

struct Node;

class NetExpr {
public:
    NetExpr() = default;
    explicit NetExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    const Node& node() const { return *node_; }
    bool empty() const { return !node_; }
    std::string to_string() const;

private:
    std::shared_ptr<const Node> node_;
};

struct Node {
    NodeKind kind;
    SmoothFn fn;
    DistributionDesc dist;
    std::shared_ptr<const Mollifier> rho;
    GeneralizedConstant c;
    int order = 0;
    DriftLaw drift;
    double a = 0.0, b = 0.0;
    NetExpr lhs, rhs;
};

NetExpr embed(SmoothFn f);
NetExpr mollified(DistributionDesc d, std::shared_ptr<const Mollifier> rho);
NetExpr defect(SmoothFn f, std::shared_ptr<const Mollifier> rho); // f * rho_eps - f
NetExpr add(NetExpr a, NetExpr b);
NetExpr sub(NetExpr a, NetExpr b);
NetExpr mul(NetExpr a, NetExpr b);
NetExpr scale(GeneralizedConstant c, NetExpr a);
NetExpr derive(int k, NetExpr a);
NetExpr drift(NetExpr a, DriftLaw law);
NetExpr fourier_node(NetExpr a);
NetExpr inv_fourier_node(NetExpr a);
NetExpr restrict(NetExpr e, double a, double b);

struct ParseContext {
    std::shared_ptr<const Mollifier> rho;
};

NetExpr parse_net(std::string_view text, const ParseContext& ctx);

struct Interval {
    double lo, hi;
};

Interval net_domain(const NetExpr& e, double eps, const EvalConfig& cfg);

// values on the composite grid of cfg (base grid plus eps-scale patches at features)
SampledFunction eval_net(const NetExpr& e, double eps, const EvalConfig& cfg, int max_order);
// values at the given sorted points, no refinement
SampledFunction eval_net_at(const NetExpr& e, double eps, const std::vector<double>& points,
                            const EvalConfig& cfg, int max_order);

// a net known only through its slices, one per grid eps
struct SampledNet {
    EpsilonGrid grid;
    std::vector<SampledFunction> slices;
};

struct SweepResult {
    std::vector<ScalarNetSamples> samples; // one per spec
    std::vector<bool> truncated;           // tail-domination warning on any eps
};

// evaluates e once per eps and every spec on that slice; parallel over eps
SweepResult sweep_specs(const NetExpr& e, const std::vector<SeminormSpec>& specs, const EpsilonGrid& grid,
                        const EvalConfig& cfg);
ScalarNetSamples seminorm_sweep(const NetExpr& e, const SeminormSpec& spec, const EpsilonGrid& grid,
                                const EvalConfig& cfg);

SweepResult sweep_specs(const SampledNet& net, const std::vector<SeminormSpec>& specs);

// GTAU_THREADS, 0 or unset = hardware concurrency
unsigned worker_threads();

} // namespace gtau
