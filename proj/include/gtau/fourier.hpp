#pragma once
// F(f)(xi) = int e^{-i xi x} f(x) dx, inverse with 1/(2 pi)

#include "gtau/classify.hpp"
#include "gtau/net.hpp"

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace gtau {

using Complex = std::complex<double>;

// x_j = -R + j h and xi_k = (k - N/2) dxi, dxi = 2 pi / (N h), j, k < N
struct SpectralGrid {
    std::size_t N = 0;
    double R = 0.0, h = 0.0, dxi = 0.0;
    double x(std::size_t j) const { return -R + double(j) * h; }
    double xi(std::size_t k) const { return (double(k) - double(N / 2)) * dxi; }
    double nyquist() const { return double(N / 2) * dxi; }
    std::vector<double> x_nodes() const;
    std::vector<double> xi_nodes() const;
};

SpectralGrid spectral_grid(const EvalConfig& cfg);
EvalConfig fourier_config(); // R 40, N 2^17
EpsilonGrid fourier_grid();  // 2^-1 .. 2^-6

// trapezoid sums with the periodic grid, FFTW underneath
std::vector<Complex> forward_transform(const std::vector<Complex>& f, const SpectralGrid& g);
std::vector<Complex> inverse_transform(const std::vector<Complex>& F, const SpectralGrid& g);

// coeff delta^(k)(xi - center)
struct DeltaTerm {
    int k = 0;
    double center = 0.0;
    Complex coeff;
};
// coeff e^{-i xi c} w(xi) / (i xi) in principal value; w = rho^(eps xi) or 2 e^{-xi^2/4}
struct PvTerm {
    enum Profile { mollified_step, erf_step } profile = mollified_step;
    Complex coeff;
    double center = 0.0;
    std::shared_ptr<const Mollifier> rho; // mollified_step only
};

struct SpectralSlice {
    double eps = 1.0;
    std::vector<Complex> regular; // decaying part, on the spectral grid
    std::vector<DeltaTerm> deltas;
    std::vector<PvTerm> pv;
    double log_scale = 0.0;
};

struct RapidDistNet {
    EpsilonGrid grid;
    SpectralGrid spec;
    std::shared_ptr<const Mollifier> rho;
    std::vector<SpectralSlice> slices;
    std::string provenance;

    // regular plus principal-value parts at xi_k (pv read as 0 at xi = 0), scale applied
    Complex value(std::size_t slice, std::size_t k) const;
    // as value, with each delta carrying weight coeff / dxi on the nearest node (k = 0 terms only)
    std::vector<Complex> sampled(std::size_t slice) const;
    RapidDistNet scaled(const GeneralizedConstant& c) const;
};

RapidDistNet fourier_net(const NetExpr& e, const EpsilonGrid& grid, const EvalConfig& cfg);
SpectralSlice fourier_slice(const NetExpr& e, double eps, const EvalConfig& cfg);
SampledNet inv_fourier_net(const RapidDistNet& T, int max_order = 3);

// transform of u_eps rho^(eps .)
RapidDistNet classical_fourier_tau(const NetExpr& e, std::shared_ptr<const Mollifier> rho, const EpsilonGrid& grid,
                                   const EvalConfig& cfg);

// T read as a distribution in xi, times rho^(eps xi)
RapidDistNet iota_OC(const DistributionDesc& T, std::shared_ptr<const Mollifier> rho, const EpsilonGrid& grid,
                     const EvalConfig& cfg, Complex coeff = 1.0);

ClassificationReport is_rapidly_decreasing_gdist(const RapidDistNet& T, const std::vector<TestFunction>& library,
                                                 const ClassifyOptions& opt = {});

struct HsResult {
    bool hs_type = false;
    AsymptoticEstimate estimate;
    ScalarNetSamples norms;
    std::string note;
};
// ||<xi>^s u_eps^||_{L2} per eps, then scalar moderateness
HsResult hs_type_test(const NetExpr& e, double s, const EpsilonGrid& grid, const EvalConfig& cfg,
                      const Thresholds& t = {});

// sup over the spectral grid of |A - B| per slice plus delta coefficient gaps;
// values under noise_floor times the larger sup count as 0
ScalarNetSamples spectral_difference(const RapidDistNet& a, const RapidDistNet& b, double noise_floor = 1e-12);

// sup|inv(fwd(u_eps)) - u_eps| per slice, on the periodic grid
std::vector<double> round_trip_residual(const NetExpr& e, const EpsilonGrid& grid, const EvalConfig& cfg);

// d/dxi of the regular part, through multiplication by -i x
std::vector<Complex> spectral_xi_derivative(const std::vector<Complex>& F, const SpectralGrid& g);

} // namespace gtau
