#include "gtau/embed.hpp"

#include "gtau/error.hpp"

namespace gtau {

NetExpr sigma_tau(const SmoothFn& f) { return embed(f); }

NetExpr sigma_tau(std::string_view name) { return embed(smooth_catalog(name)); }

NetExpr iota_tau(const DistributionDesc& T, std::shared_ptr<const Mollifier> rho) {
    if (!rho) throw InvalidArgument("iota_tau needs a mollifier");
    return mollified(T, std::move(rho));
}

EpsilonGrid defect_grid() { return make_epsilon_grid(2.0, 4, 16); }

ScalarNetSamples defect_sweep(const SmoothFn& f, std::shared_ptr<const Mollifier> rho, const SeminormSpec& spec,
                              const EpsilonGrid& grid, const EvalConfig& cfg) {
    return seminorm_sweep(defect(f, std::move(rho)), spec, grid, cfg);
}

AsymptoticEstimate commutativity_defect(const SmoothFn& f, std::shared_ptr<const Mollifier> rho,
                                        const SeminormSpec& spec, const EpsilonGrid& grid, const EvalConfig& cfg,
                                        double tail_fraction) {
    return estimate_order(defect_sweep(f, std::move(rho), spec, grid, cfg), tail_fraction);
}

std::pair<ClassificationReport, ClassificationReport>
reduced_negligibility_inputs(const NetExpr& e, const std::vector<TestFunction>& library, const EpsilonGrid& grid,
                             const EvalConfig& cfg, const ClassifyOptions& opt) {
    ClassifyOptions o0 = opt;
    o0.L = 0;
    return {is_moderate(e, library, grid, cfg, o0), is_moderate(e, library, grid, cfg, opt)};
}

} // namespace gtau
