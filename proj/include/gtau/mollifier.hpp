#pragma once

#include "gtau/eval_config.hpp"
#include "gtau/jet.hpp"
#include "gtau/testfn.hpp"

#include <array>
#include <vector>

namespace gtau {

// rho^ = 1 on [-inner, inner], 0 outside [-outer, outer]. The glue is a box
// convolved with an infinite product of shrinking boxes, so
//   rho(u) = (a / pi) sinc(a u) prod_j sinc(s_j u)
// with a = (inner + outer) / 2 and sum_j s_j < (outer - inner) / 2.
class Mollifier {
public:
    Mollifier(double inner, double outer, const EvalConfig& cfg);

    double inner() const { return inner_; }
    double outer() const { return outer_; }
    double center_frequency() const { return a_; }
    double glue_width() const { return glue_; }

    double value(double u) const;
    Jet jet(double u, int order) const;      // Taylor jet of rho at u
    double spectrum(double xi) const;        // rho^(xi)
    double spectrum_derivative(double xi) const;
    double cumulative(double u) const;       // int_{-inf}^u rho
    double saturation_radius() const { return u_sat_; }
    double lobe_width() const;
    double cumulative_error() const { return cumulative_error_; } // quadrature drift of int_0^U rho - 1/2               // distance between the first zeros around 0

    // trapezoidal moments on the build grid, k = 0..12
    const std::vector<double>& moments() const { return moments_; }
    int moment_order() const { return K_; }
    double decay_constant() const { return decay_; } // max <x>^6 |rho| on the grid
    const std::vector<double>& grid_samples() const { return samples_; }

    // moments of the exact construction: 1, 0, 0, ...
    double exact_moment(int k) const { return k == 0 ? 1.0 : 0.0; }

private:
    double glue_cdf(double t) const;     // P(X <= t), X the glue variable
    double glue_density(double t) const;
    double mu_hat(double x) const;

    double inner_, outer_, a_, glue_;
    int n_equal_;
    double s_equal_;
    std::vector<double> tail_;
    static constexpr int kLogSincTerms = 8;
    std::vector<std::array<double, kLogSincTerms>> tail_power_sums_; // sums over j >= J of t_j^{2k}
    double cumulative_error_ = 0.0;
    double u_sat_;
    EvalConfig cfg_;

    // Chebyshev panels for the glue cdf/density on [0, glue_] and the cumulative on [0, u_sat_]
    struct Panels {
        double lo = 0, hi = 0, width = 0;
        int nodes = 0;
        std::vector<double> values; // panel-major
        double eval(double t) const;
    };
    Panels cdf_, density_, cumulative_;

    std::vector<double> moments_;
    std::vector<double> samples_;
    int K_ = -1;
    double decay_ = 0.0;
};

constexpr double kMassTolerance = 1e-10;
constexpr double kMomentTolerance = 1e-8;
constexpr int kMaxMomentOrder = 12;

// throws MomentFailure naming the first failing k when fewer than
// required_order moments vanish
Mollifier build_mollifier(double plateau_inner, double plateau_outer, const EvalConfig& cfg,
                          int required_order = 8);

std::vector<double> check_moments(const Mollifier& rho, int k_max);

// eps^{-1} rho(x / eps) on the given points (sorted), derivative rows up to max_order
SampledFunction scaled_mollifier(const Mollifier& rho, double eps, const std::vector<double>& points,
                                 int max_order);
// same on the composite evaluation grid of cfg (uniform base plus a patch at 0)
SampledFunction scaled_mollifier(const Mollifier& rho, double eps, const EvalConfig& cfg,
                                 int max_order);

// refinement block around a feature: points center + k spacing within half_width
struct Patch {
    double center;
    double half_width;
    double spacing;
};

// covers |u| <= saturation radius at cfg.patch_density points per half lobe
Patch mollifier_patch(const Mollifier& rho, double center, double eps, const EvalConfig& cfg);

// uniform base grid on [lo, hi] with the patches substituted (overlaps merged),
// endpoints included
std::vector<double> composite_points(const EvalConfig& cfg, std::vector<Patch> patches, double lo,
                                     double hi);
std::vector<double> uniform_points(const EvalConfig& cfg); // N + 1 points on [-R, R]

} // namespace gtau
