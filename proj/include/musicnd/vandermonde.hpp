// SPDX-License-Identifier: Apache-2.0
#pragma once

// Multidimensional Vandermonde matrices Phi^L and the sieve-type bounds on
// their extreme singular values under a per-axis gap condition
//
//   prod_k (1 - 1/(q_k L_k)) <= sigma^2(Phi^L) / prod_k L_k <= prod_k (1 + 1/(q_k L_k)),
//
// valid for even L_k. Odd L_k are handled by bounding with L_k + 1 from above
// and L_k - 1 from below, since Phi^{L-} is a row subset of Phi^L, which is a
// row subset of Phi^{L+}.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "musicnd/core/torus.hpp"
#include "musicnd/hankel.hpp"
#include "musicnd/linalg.hpp"

namespace musicnd {

/// Per-direction separation q_k in (0, 1/2].
class GapParams {
public:
    GapParams() = default;
    explicit GapParams(std::vector<double> q) : q_(std::move(q))
    {
        for (double v : q_)
            if (!(v > 0.0 && v <= 0.5)) throw std::invalid_argument("gap parameters must lie in (0, 1/2]");
    }
    GapParams(std::initializer_list<double> q) : GapParams(std::vector<double>(q)) {}

    /// The tightest gap parameters a support satisfies.
    static GapParams of(const FrequencySupport& s)
    {
        std::vector<double> q(s.dim());
        for (std::size_t k = 0; k < q.size(); ++k) q[k] = minimum_separation(s, k);
        return GapParams(std::move(q));
    }

    std::size_t dim() const { return q_.size(); }
    double operator[](std::size_t k) const { return q_[k]; }
    const std::vector<double>& values() const { return q_; }

private:
    std::vector<double> q_;
};

/// Bounds on sigma_max^2 and sigma_min^2 of Phi^L, each stored relative to its
/// own normaliser prod_k L_k (the normalisers differ only for odd L_k).
struct SingularValueBounds {
    double upper = 0.0;
    double lower = 0.0;
    double upper_normalizer = 0.0;
    double lower_normalizer = 0.0;
    /// False when some q_k L_k <= 1 (or an odd L_k = 1): lower is then 0.
    bool lower_available = false;

    double normalizer() const { return upper_normalizer; }
    double sigma_max_sq() const { return upper * upper_normalizer; }
    double sigma_min_sq() const { return lower * lower_normalizer; }
};

/// Sufficient condition for rank(Phi^L) = s on distinct nodes: L_k + 1 >= s.
inline bool rank_condition(std::size_t s, const Dims& l)
{
    return std::all_of(l.begin(), l.end(), [s](int v) { return static_cast<long>(v) + 1 >= static_cast<long>(s); });
}

namespace detail {
inline SingularValueBounds product_bounds(const std::vector<double>& q, const Dims& upper_l, const Dims& lower_l)
{
    if (q.size() != upper_l.size()) throw std::invalid_argument("dimension mismatch");
    SingularValueBounds b;
    b.upper = 1.0;
    b.lower = 1.0;
    b.upper_normalizer = product_of(upper_l);
    b.lower_normalizer = product_of(lower_l);
    b.lower_available = true;
    for (std::size_t k = 0; k < q.size(); ++k) {
        b.upper *= 1.0 + 1.0 / (q[k] * upper_l[k]);
        const double ql = q[k] * lower_l[k];
        if (lower_l[k] < 1 || ql <= 1.0)
            b.lower_available = false;
        else
            b.lower *= 1.0 - 1.0 / ql;
    }
    if (!b.lower_available) b.lower = 0.0;
    return b;
}
}  // namespace detail

/// Bounds for even L. Odd entries are rejected; use remark2_bounds.
inline SingularValueBounds theorem2_bounds(const GapParams& q, const Dims& l)
{
    for (int v : l)
        if (v <= 0 || v % 2 != 0) throw std::invalid_argument("even-L bounds need positive even L_k");
    return detail::product_bounds(q.values(), l, l);
}

namespace detail {
inline SingularValueBounds remark2_bounds(const std::vector<double>& q, const Dims& l)
{
    Dims plus = l, minus = l;
    for (std::size_t k = 0; k < l.size(); ++k) {
        if (l[k] <= 0) throw std::invalid_argument("bounds need L_k >= 1");
        if (l[k] % 2 != 0) {
            ++plus[k];
            --minus[k];
        }
    }
    return product_bounds(q, plus, minus);
}
}  // namespace detail

/// Bounds for any L >= 1: odd L_k is replaced by L_k + 1 in the upper bound
/// and by L_k - 1 in the lower bound.
inline SingularValueBounds remark2_bounds(const GapParams& q, const Dims& l)
{
    return detail::remark2_bounds(q.values(), l);
}

/// theorem2_bounds for even L, remark2_bounds otherwise (they agree on even L).
inline SingularValueBounds vandermonde_bounds(const GapParams& q, const Dims& l)
{
    return remark2_bounds(q, l);
}

struct Theorem2Report {
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    SingularValueBounds bounds;
    bool gap_satisfied = false;     // per-axis separation >= q_k
    bool lower_applicable = false;  // gap satisfied and positive lower bound
    bool upper_holds = false;
    bool lower_holds = true;        // vacuous when not applicable
    double upper_slack = 0.0;       // bound - sigma_max^2 (>= 0 when it holds)
    double lower_slack = 0.0;       // sigma_min^2 - bound

    bool violated() const { return !upper_holds || (lower_applicable && !lower_holds); }
};

/// Compare SVD singular values of Phi^L against the product bounds. The upper
/// bound is always asserted; if the support is closer than q_k along some
/// direction it is evaluated at the support's own separation there. The lower
/// bound is asserted only when the support satisfies the gap q and the bound
/// is positive. A relative tolerance of 1e-12 absorbs rounding in the SVD.
inline Theorem2Report verify_theorem2(const FrequencySupport& s, const Dims& l, const GapParams& q)
{
    if (s.empty()) throw std::invalid_argument("empty support");
    Theorem2Report r;
    const RVector sv = singular_values(build_phi(s, l));
    r.sigma_max = sv(0);
    r.sigma_min = sv(sv.size() - 1);
    if (q.dim() != s.dim()) throw std::invalid_argument("dimension mismatch");

    std::vector<double> effective = q.values();
    r.gap_satisfied = true;
    if (s.size() >= 2)
        for (std::size_t k = 0; k < q.dim(); ++k) {
            const double actual = minimum_separation(s, k);
            if (actual < q[k]) {
                r.gap_satisfied = false;
                effective[k] = actual;
            }
        }
    r.bounds = detail::remark2_bounds(effective, l);
    if (!r.gap_satisfied) {
        r.bounds.lower = 0.0;
        r.bounds.lower_available = false;
    }
    r.lower_applicable = r.bounds.lower_available;

    constexpr double rel = 1e-12;
    const double smax2 = r.sigma_max * r.sigma_max;
    const double smin2 = r.sigma_min * r.sigma_min;
    r.upper_slack = r.bounds.sigma_max_sq() - smax2;
    r.upper_holds = smax2 <= r.bounds.sigma_max_sq() * (1.0 + rel);
    if (r.lower_applicable) {
        r.lower_slack = smin2 - r.bounds.sigma_min_sq();
        r.lower_holds = smin2 >= r.bounds.sigma_min_sq() * (1.0 - rel);
    }
    return r;
}

}  // namespace musicnd
