#pragma once

#include "gtau/classify.hpp"
#include "gtau/net.hpp"

#include <memory>
#include <string_view>
#include <utility>

namespace gtau {

// constant net of a slowly increasing catalog function
NetExpr sigma_tau(const SmoothFn& f);
NetExpr sigma_tau(std::string_view catalog_name);

// T * rho_eps
NetExpr iota_tau(const DistributionDesc& T, std::shared_ptr<const Mollifier> rho);

EpsilonGrid defect_grid(); // 2^-4 .. 2^-16

// eps -> spec(f * rho_eps - f)
ScalarNetSamples defect_sweep(const SmoothFn& f, std::shared_ptr<const Mollifier> rho, const SeminormSpec& spec,
                              const EpsilonGrid& grid, const EvalConfig& cfg);
AsymptoticEstimate commutativity_defect(const SmoothFn& f, std::shared_ptr<const Mollifier> rho,
                                        const SeminormSpec& spec, const EpsilonGrid& grid, const EvalConfig& cfg,
                                        double tail_fraction = 0.5);

// order-0 report and full moderateness report
std::pair<ClassificationReport, ClassificationReport>
reduced_negligibility_inputs(const NetExpr& e, const std::vector<TestFunction>& library, const EpsilonGrid& grid,
                             const EvalConfig& cfg, const ClassifyOptions& opt = {});

} // namespace gtau
