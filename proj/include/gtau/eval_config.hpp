#pragma once

#include <cstddef>

namespace gtau {

enum class DerivativeScheme { closed_form, finite_difference_4, spectral };

struct EvalConfig {
    double R = 40.0;
    std::size_t N = 1u << 14;
    DerivativeScheme scheme = DerivativeScheme::closed_form; // used by sampled data only
    // refinement patch around mollifier features, in sample points per half lobe
    int patch_density = 32;

    double h() const { return 2.0 * R / double(N); }
    void validate() const;
};

} // namespace gtau
