#pragma once
// the acceptance battery behind `gtau report`

#include "gtau/classify.hpp"
#include "gtau/net.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gtau {

constexpr double kPlateauInner = 8.0, kPlateauOuter = 24.0;

struct BatteryConfig {
    EpsilonGrid grid = default_grid();
    EvalConfig cfg;
    ClassifyOptions opt;
    std::vector<TestFunction> library = default_library();
    double plateau_inner = kPlateauInner, plateau_outer = kPlateauOuter;
    std::vector<int> only; // empty = criteria 1..9
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool error = false;
    std::string detail;
};

struct BatteryResult {
    std::vector<CriterionResult> criteria;
    std::map<std::string, std::string> artifacts; // file name -> CSV text
    std::string summary_csv() const;              // criterion,name,result,detail
    bool all_pass() const;
    bool any_error() const;
};

// the shipped net catalog, (label, expression)
std::vector<std::pair<std::string, std::string>> catalog_nets();

std::shared_ptr<const Mollifier> battery_mollifier(const BatteryConfig& c);

BatteryResult run_battery(const BatteryConfig& c);
// criteria 1..9, then a second run with a different thread count compared byte for byte (criterion 10)
BatteryResult run_report(const BatteryConfig& c);

} // namespace gtau
