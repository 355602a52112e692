// SPDX-License-Identifier: Apache-2.0
#pragma once

// Multi-index bookkeeping shared by every module.
//
// A multi-index n with 0 <= n <= L (componentwise) is flattened in one fixed
// order: the first coordinate is the most significant digit, the last one
// varies fastest. This is row-major order for an array of extents L_k + 1.
// Every vectorisation in the library (imaging vectors, Hankel rows and
// columns, measurement storage) goes through these helpers.

#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace musicnd {

/// Per-direction maximal index (N or L). Entry k is the largest index along
/// direction k, so the extent along k is dims[k] + 1.
using Dims = std::vector<int>;

/// #(L) = prod_k (L_k + 1)
inline long count(const Dims& max_index)
{
    long c = 1;
    for (int l : max_index) c *= static_cast<long>(l) + 1;
    return c;
}

/// prod_k L_k, i.e. #(L - 1).
inline double product_of(const Dims& values)
{
    double p = 1.0;
    for (int l : values) p *= static_cast<double>(l);
    return p;
}

inline Dims difference(const Dims& n, const Dims& l)
{
    if (n.size() != l.size()) throw std::invalid_argument("dimension mismatch");
    Dims d(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) d[k] = n[k] - l[k];
    return d;
}

inline std::string to_string(const Dims& d)
{
    std::string s = "(";
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(d[k]);
    }
    return s + ")";
}

/// Flat position of multi-index n inside the box 0..max_index.
inline long flatten(std::span<const int> n, const Dims& max_index)
{
    long m = 0;
    for (std::size_t k = 0; k < max_index.size(); ++k) m = m * (max_index[k] + 1L) + n[k];
    return m;
}

/// Inverse of flatten, written as the successive division/remainder rule:
/// n_1 = floor(m / #(L_2..L_D)), r_1 = m mod #(L_2..L_D), n_2 = floor(r_1 / #(L_3..L_D)), ...
inline std::vector<int> unflatten(long m, const Dims& max_index)
{
    const std::size_t d = max_index.size();
    std::vector<int> n(d);
    long r = m;
    for (std::size_t k = 0; k < d; ++k) {
        long tail = 1;
        for (std::size_t j = k + 1; j < d; ++j) tail *= max_index[j] + 1L;
        n[k] = static_cast<int>(r / tail);
        r %= tail;
    }
    return n;
}

/// Lexicographic walk over 0 <= n <= max_index in flatten order.
class MultiIndexRange {
public:
    explicit MultiIndexRange(Dims max_index) : max_(std::move(max_index)), cur_(max_.size(), 0)
    {
        for (int l : max_)
            if (l < 0) done_ = true;
    }

    bool done() const { return done_; }
    const std::vector<int>& operator*() const { return cur_; }

    void next()
    {
        for (std::size_t k = max_.size(); k-- > 0;) {
            if (cur_[k] < max_[k]) {
                ++cur_[k];
                return;
            }
            cur_[k] = 0;
        }
        done_ = true;
    }

private:
    Dims max_;
    std::vector<int> cur_;
    bool done_ = false;
};

}  // namespace musicnd
