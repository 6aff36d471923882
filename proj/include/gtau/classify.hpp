#pragma once

#include "gtau/net.hpp"
#include "gtau/scale.hpp"
#include "gtau/testfn.hpp"

#include <limits>
#include <string>
#include <vector>

namespace gtau {

struct ClassifyOptions {
    Thresholds thresholds;
    double tail_fraction = 0.5;
    int L = 3;              // derivative depth
    int q_max = 10;         // weighted-side search
    double max_spread = 0.5; // G^inf profile tolerance
};

enum class Definition { nu_family, weighted_global };
const char* to_string(Definition d);

struct ReportRow {
    std::string family, param; // test function id or weight exponent
    int l = 0;
    int q = -1; // weight exponent -q on the weighted side
    ScalarNetSamples samples;
    AsymptoticEstimate estimate;
    Verdict verdict = Verdict::neither;
    bool truncated = false;
};

struct ClassificationReport {
    std::vector<ReportRow> rows;
    bool moderate = false, negligible = false, g_infinity = false;
    double uniform_m = std::numeric_limits<double>::quiet_NaN();
    Definition definition_used = Definition::nu_family;
    std::vector<std::string> notes;
    std::string to_csv() const; // family,param,l,q,slope,sharp,residual,verdict,truncated
};

// nu_{phi,l}, phi over the library, l = 0..L
std::vector<SeminormSpec> nu_specs(const std::vector<TestFunction>& library, int L);

ClassificationReport classify_rows(const std::vector<SeminormSpec>& specs, const SweepResult& sweep,
                                   const ClassifyOptions& opt);

ClassificationReport is_moderate(const NetExpr& e, const std::vector<TestFunction>& library, const EpsilonGrid& grid,
                                 const EvalConfig& cfg, const ClassifyOptions& opt = {});
ClassificationReport is_moderate(const SampledNet& net, const std::vector<TestFunction>& library,
                                 const ClassifyOptions& opt = {});
ClassificationReport is_negligible(const NetExpr& e, const std::vector<TestFunction>& library,
                                   const EpsilonGrid& grid, const EvalConfig& cfg, const ClassifyOptions& opt = {});

// p_{-q,l} global sups, existential q per l, truncated q skipped
ClassificationReport weighted_classify(const NetExpr& e, const EpsilonGrid& grid, const EvalConfig& cfg,
                                       const ClassifyOptions& opt = {});

struct EquivalenceResult {
    ClassificationReport nu, weighted;
    bool agree = false;
};
EquivalenceResult tau_equivalence_check(const NetExpr& e, const std::vector<TestFunction>& library,
                                        const EpsilonGrid& grid, const EvalConfig& cfg,
                                        const ClassifyOptions& opt = {});

ClassificationReport is_ginfty(const NetExpr& e, const std::vector<TestFunction>& library, const EpsilonGrid& grid,
                               const EvalConfig& cfg, const ClassifyOptions& opt = {});
// m(l) = -slope(l) for one test function, zero tails reported as -inf
std::vector<double> ginfty_profile(const ClassificationReport& r, const std::string& family, const std::string& param);

struct ReducedResult {
    bool verdict = false;
    bool finite_order = false; // order-0 rows pass the floor only with a power law
    ClassificationReport order0, moderate, direct;
};
ReducedResult reduced_negligibility(const NetExpr& e, const std::vector<TestFunction>& library,
                                    const EpsilonGrid& grid, const EvalConfig& cfg, const ClassifyOptions& opt = {});

enum class Sharpness { tau, tau_infinity };

struct SingularSupportReport {
    std::vector<double> probes;
    double window = 0.0;
    std::vector<bool> singular;
    Sharpness sharp = Sharpness::tau_infinity;
    std::vector<double> singular_probes() const;
    std::string to_csv() const; // probe,lo,hi,verdict
};

SingularSupportReport singular_support(const NetExpr& u, Sharpness sharp, const std::vector<double>& probes,
                                       double window, const std::vector<TestFunction>& library,
                                       const EpsilonGrid& grid, const EvalConfig& cfg,
                                       const ClassifyOptions& opt = {});

} // namespace gtau
