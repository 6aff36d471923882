#pragma once

#include "gtau/net.hpp"

#include <memory>
#include <random>

namespace fixture {

inline const gtau::EvalConfig& cfg() {
    static gtau::EvalConfig c;
    return c;
}

inline std::shared_ptr<const gtau::Mollifier> rho() {
    static auto r = std::make_shared<const gtau::Mollifier>(gtau::build_mollifier(8.0, 24.0, cfg()));
    return r;
}

inline gtau::NetExpr net(const std::string& s) { return gtau::parse_net(s, gtau::ParseContext{rho()}); }

// short grid for the slower sweeps
inline gtau::EpsilonGrid grid() { return gtau::make_epsilon_grid(2.0, 4, 14); }

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20261014);
    return g;
}
inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }
inline int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng()); }

} // namespace fixture
