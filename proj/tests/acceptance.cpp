// one line per criterion, nonzero exit if any fails
#include "gtau/battery.hpp"

#include <cstdio>

int main() {
    gtau::BatteryResult r = gtau::run_report(gtau::BatteryConfig{});
    for (const auto& c : r.criteria)
        std::printf("criterion %d %s: %s  (%s)\n", c.id, c.name.c_str(), c.error ? "ERROR" : c.pass ? "PASS" : "FAIL",
                    c.detail.c_str());
    std::fflush(stdout);
    return r.all_pass() && r.criteria.size() == 10 ? 0 : 1;
}
