#pragma once

#include "gtau/net.hpp"

namespace gtau::detail {

// Taylor jets per point; actual values are jets * exp(log_scale)
struct NodeValue {
    std::vector<Jet> jets;
    double log_scale = 0.0;
};

NodeValue eval_node(const Node& n, const std::vector<double>& x, double eps, int order, const EvalConfig& cfg);

// implemented with the transforms
NodeValue fourier_node_value(const Node& n, const std::vector<double>& xi, double eps, int order,
                             const EvalConfig& cfg);
NodeValue sampled_l2_value(const SampledL2& d, const Mollifier& rho, const std::vector<double>& x, double eps,
                           int order, const EvalConfig& cfg);

std::string format_number(double v);

template <class F>
void parallel_for(std::size_t n, F&& f);

} // namespace gtau::detail

#include <atomic>
#include <exception>
#include <thread>

namespace gtau::detail {

template <class F>
void parallel_for(std::size_t n, F&& f) {
    unsigned t = std::min<std::size_t>(worker_threads(), n);
    std::vector<std::exception_ptr> errs(n);
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                f(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < t; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < n;) {
                    try {
                        f(i);
                    } catch (...) {
                        errs[i] = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
    }
    // first failure by index, independent of scheduling
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace gtau::detail
