#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace gtau {

struct EpsilonGrid {
    double base = 2.0;
    int j_min = 4;
    int j_max = 20;
    std::vector<double> values; // strictly decreasing

    std::size_t size() const { return values.size(); }
};

EpsilonGrid make_epsilon_grid(double base, int j_min, int j_max);
EpsilonGrid default_grid();

// v(eps) >= 0 stored as ln v so that e^{+-1/eps} scaling survives; ln 0 = -inf
class ScalarNetSamples {
public:
    ScalarNetSamples() = default;
    ScalarNetSamples(std::vector<double> eps, std::vector<double> log_values);

    static ScalarNetSamples from_values(const std::vector<double>& eps,
                                        const std::vector<double>& values);

    std::size_t size() const { return eps_.size(); }
    double eps(std::size_t i) const { return eps_[i]; }
    double log_value(std::size_t i) const { return log_[i]; }
    double value(std::size_t i) const; // may overflow to inf
    bool is_zero(std::size_t i) const;
    const std::vector<double>& eps_values() const { return eps_; }
    const std::vector<double>& log_values() const { return log_; }

    ScalarNetSamples scaled(double c) const;

    std::string to_csv() const;
    static ScalarNetSamples from_csv(std::string_view text);

private:
    std::vector<double> eps_;
    std::vector<double> log_;
};

ScalarNetSamples multiply(const ScalarNetSamples& a, const ScalarNetSamples& b);
ScalarNetSamples add(const ScalarNetSamples& a, const ScalarNetSamples& b);
ScalarNetSamples pointwise_max(const ScalarNetSamples& a, const ScalarNetSamples& b);

// shortest round-trip decimal
std::string format_number(double v);

// prints ln-encoded magnitudes in decimal even past the double range
std::string format_log_magnitude(double log_value);
double parse_log_magnitude(std::string_view text);

constexpr double kSlopeInfinity = std::numeric_limits<double>::infinity();

struct AsymptoticEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    double sharp_value = 0.0;
    double tail_fraction = 0.5;
    std::size_t tail_points = 0;
    std::size_t nonzero_points = 0;
    bool zero_tail = false;
};

AsymptoticEstimate estimate_order(const ScalarNetSamples& samples, double tail_fraction = 0.5);

double sharp_distance(const ScalarNetSamples& difference_samples, double tail_fraction = 0.5);

struct Thresholds {
    double moderate_cap = 20.0;
    double negligible_floor = 8.0;
    double fit_tolerance = 0.05;
};

enum class Verdict { moderate, negligible, neither };

const char* to_string(Verdict v);

struct GeneralizedNumberClass {
    Verdict verdict = Verdict::neither;
    double witness_order = 0.0;

    bool moderate() const { return verdict != Verdict::neither; }
    bool negligible() const { return verdict == Verdict::negligible; }
};

GeneralizedNumberClass classify_estimate(const AsymptoticEstimate& est, const Thresholds& t);
GeneralizedNumberClass classify_scalar_net(const ScalarNetSamples& samples,
                                           const Thresholds& t = {},
                                           double tail_fraction = 0.5);

// c * eps^p * e^{b/eps} * |ln eps|^q, the closed forms used for module scaling
struct GeneralizedConstant {
    double coeff = 1.0;
    double eps_power = 0.0;
    double inv_eps = 0.0;
    double log_power = 0.0;

    double log_abs(double eps) const;
    double sign() const { return coeff < 0 ? -1.0 : 1.0; }
    ScalarNetSamples samples(const EpsilonGrid& grid) const;
    std::string to_string() const;
};

GeneralizedConstant operator*(const GeneralizedConstant& a, const GeneralizedConstant& b);

} // namespace gtau
