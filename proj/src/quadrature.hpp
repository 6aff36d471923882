#pragma once

#include <array>
#include <cmath>

namespace gtau::detail {

constexpr int kGL = 16;

struct GaussLegendre {
    std::array<double, kGL> x{}, w{};
    GaussLegendre() {
        for (int i = 0; i < kGL; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (kGL + 0.5));
            double dp = 1.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= kGL; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = kGL * (z * p0 - p1) / (z * z - 1.0);
                double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

inline const GaussLegendre& gl() {
    static const GaussLegendre g;
    return g;
}

template <class F>
double integrate(F&& f, double lo, double hi) {
    const auto& g = gl();
    double m = 0.5 * (lo + hi), r = 0.5 * (hi - lo), s = 0.0;
    for (int i = 0; i < kGL; ++i) s += g.w[i] * f(m + r * g.x[i]);
    return s * r;
}

} // namespace gtau::detail
