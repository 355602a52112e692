// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "musicnd/core/multi_index.hpp"
#include "musicnd/core/torus.hpp"

namespace musicnd::experiments {

/// One trial. q_rl is NaN when the scenario has no spacing parameter.
struct ExperimentRecord {
    std::string scenario;
    std::uint64_t seed = 0;
    std::size_t s = 0;
    Dims n;
    Dims l;
    double q_rl = std::numeric_limits<double>::quiet_NaN();
    double nsr = 0.0;
    double dyn_range = 1.0;
    std::string family;
    double err_rl = 0.0;
    double err_over_q = std::numeric_limits<double>::quiet_NaN();
    double wall_ms = 0.0;
    std::string method = "music";
    double metric = std::numeric_limits<double>::quiet_NaN();
};

/// Hausdorff distance in Rayleigh lengths: direction k is scaled by N_k
/// before taking the max over directions.
inline double hausdorff_rl(const FrequencySupport& exact, const FrequencySupport& estimate, const Dims& n)
{
    if (exact.empty() || estimate.empty()) throw std::invalid_argument("Hausdorff distance of an empty set");
    auto d = [&](const TorusPoint& a, const TorusPoint& b) {
        double m = 0.0;
        for (std::size_t k = 0; k < n.size(); ++k) m = std::max(m, wrapped_distance_k(a, b, k) * n[k]);
        return m;
    };
    auto directed = [&](const FrequencySupport& from, const FrequencySupport& to) {
        double worst = 0.0;
        for (const auto& a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& b : to) best = std::min(best, d(a, b));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(exact, estimate), directed(estimate, exact));
}

/// log10 y = exponent * log10 q + intercept.
struct PowerLawFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;  // in log10 units
    double q_min = 0.0;
    double q_max = 0.0;
    std::size_t points = 0;
};

inline PowerLawFit fit_power_law(const std::vector<double>& q, const std::vector<double>& y)
{
    if (q.size() != y.size()) throw std::invalid_argument("fit inputs differ in length");
    if (q.size() < 4) throw std::domain_error("power-law fit needs at least 4 points, got " + std::to_string(q.size()));
    const auto m = static_cast<double>(q.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(q.size()), ly(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!(q[i] > 0.0 && y[i] > 0.0)) throw std::domain_error("power-law fit needs positive data");
        lx[i] = std::log10(q[i]);
        ly[i] = std::log10(y[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double det = m * sxx - sx * sx;
    if (!(std::abs(det) > 0.0)) throw std::domain_error("power-law fit needs distinct q values");
    PowerLawFit f;
    f.exponent = (m * sxy - sx * sy) / det;
    f.intercept = (sy - f.exponent * sx) / m;
    double ss = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double r = ly[i] - (f.exponent * lx[i] + f.intercept);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / m);
    f.q_min = *std::min_element(q.begin(), q.end());
    f.q_max = *std::max_element(q.begin(), q.end());
    f.points = q.size();
    return f;
}

/// count points geometrically spaced from lo to hi inclusive.
inline std::vector<double> log_space(double lo, double hi, std::size_t count)
{
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
    v.back() = hi;
    return v;
}

/// Calls body(i) for i in [0, count) on up to jobs threads. Results must be
/// written to per-index slots so the outcome does not depend on scheduling.
/// The first exception thrown by any body is rethrown.
inline void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body)
{
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(count, 1)));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Wall-clock stopwatch in milliseconds.
class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace musicnd::experiments
