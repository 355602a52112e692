// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace musicnd {

/// Canonical representative of x mod 1 in [0, 1).
inline double wrap_unit(double x)
{
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;  // x slightly below an integer can round up to 1
    return r;
}

/// Circular distance on [0, 1): min over integers m of |a + m - b|.
inline double wrapped_distance(double a, double b)
{
    const double d = wrap_unit(a - b);
    return std::min(d, 1.0 - d);
}

/// A frequency on the torus T^D = [0,1)^D.
class TorusPoint {
public:
    TorusPoint() = default;
    explicit TorusPoint(std::vector<double> coords) : coords_(std::move(coords))
    {
        for (double& c : coords_) {
            if (!std::isfinite(c)) throw std::invalid_argument("torus coordinate must be finite");
            c = wrap_unit(c);
        }
    }
    TorusPoint(std::initializer_list<double> coords) : TorusPoint(std::vector<double>(coords)) {}

    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t k) const { return coords_[k]; }
    std::span<const double> coords() const { return coords_; }

    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

private:
    std::vector<double> coords_;
};

/// Wrapped distance along direction k (0-based).
inline double wrapped_distance_k(const TorusPoint& a, const TorusPoint& b, std::size_t k)
{
    if (k >= a.dim() || k >= b.dim()) throw std::out_of_range("direction index out of range");
    return wrapped_distance(a[k], b[k]);
}

/// Max over directions of the wrapped distance.
inline double wrapped_distance(const TorusPoint& a, const TorusPoint& b)
{
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    double d = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) d = std::max(d, wrapped_distance(a[k], b[k]));
    return d;
}

/// An ordered set of pairwise-distinct torus points of common dimension.
class FrequencySupport {
public:
    FrequencySupport() = default;
    explicit FrequencySupport(std::vector<TorusPoint> points) : points_(std::move(points))
    {
        for (std::size_t j = 0; j < points_.size(); ++j) {
            if (points_[j].dim() != points_.front().dim())
                throw std::invalid_argument("support points have mixed dimensions");
            for (std::size_t l = 0; l < j; ++l)
                if (wrapped_distance(points_[j], points_[l]) == 0.0)
                    throw std::invalid_argument("support points must be pairwise distinct");
        }
    }
    FrequencySupport(std::initializer_list<TorusPoint> points)
        : FrequencySupport(std::vector<TorusPoint>(points))
    {}

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    std::size_t dim() const { return points_.empty() ? 0 : points_.front().dim(); }
    const TorusPoint& operator[](std::size_t j) const { return points_[j]; }
    const std::vector<TorusPoint>& points() const { return points_; }
    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

private:
    std::vector<TorusPoint> points_;
};

/// q_k = min over j != l of the wrapped distance along direction k.
inline double minimum_separation(const FrequencySupport& s, std::size_t k)
{
    if (s.size() < 2) throw std::domain_error("minimum separation needs at least two points");
    double q = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s.size(); ++j)
        for (std::size_t l = 0; l < j; ++l) q = std::min(q, wrapped_distance_k(s[j], s[l], k));
    return q;
}

/// Minimum pairwise distance in the max-over-directions metric.
inline double minimum_separation(const FrequencySupport& s)
{
    if (s.size() < 2) throw std::domain_error("minimum separation needs at least two points");
    double q = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s.size(); ++j)
        for (std::size_t l = 0; l < j; ++l) q = std::min(q, wrapped_distance(s[j], s[l]));
    return q;
}

namespace detail {
inline double directed_hausdorff(const FrequencySupport& from, const FrequencySupport& to)
{
    double worst = 0.0;
    for (const auto& a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : to) best = std::min(best, wrapped_distance(a, b));
        worst = std::max(worst, best);
    }
    return worst;
}
}  // namespace detail

/// Hausdorff distance between two supports under the max-over-directions
/// wrapped metric.
inline double hausdorff_error(const FrequencySupport& exact, const FrequencySupport& estimate)
{
    if (exact.empty() || estimate.empty()) throw std::invalid_argument("Hausdorff distance of an empty set");
    if (exact.dim() != estimate.dim()) throw std::invalid_argument("dimension mismatch");
    return std::max(detail::directed_hausdorff(exact, estimate), detail::directed_hausdorff(estimate, exact));
}

}  // namespace musicnd
