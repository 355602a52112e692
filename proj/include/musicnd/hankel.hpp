// SPDX-License-Identifier: Apache-2.0
#pragma once

// D-fold Hankel matrices.
//
// For a pencil parameter L (0 < L_k < N_k) the matrix has #(L) rows and
// #(N-L) columns, and its entry at (flatten(a, L), flatten(b, N-L)) is
// y(a + b). build_hankel assembles it level by level: direction 1 gives a
// block Hankel matrix whose blocks are the (D-1)-fold Hankel matrices of the
// slices y(l, n_2, ..., n_D). hankel_by_index_law fills the same matrix
// directly from the entry formula.

#include <stdexcept>
#include <vector>

#include "musicnd/core/model.hpp"
#include "musicnd/core/multi_index.hpp"
#include "musicnd/linalg.hpp"

namespace musicnd {

class MultiLevelHankel {
public:
    MultiLevelHankel(CMatrix matrix, Dims l, Dims n) : matrix_(std::move(matrix)), l_(std::move(l)), n_(std::move(n)) {}

    const CMatrix& matrix() const { return matrix_; }
    const Dims& pencil() const { return l_; }
    const Dims& max_index() const { return n_; }
    Dims column_pencil() const { return difference(n_, l_); }
    long rows() const { return matrix_.rows(); }
    long cols() const { return matrix_.cols(); }

private:
    CMatrix matrix_;
    Dims l_;
    Dims n_;
};

inline void check_pencil(const Dims& l, const Dims& n)
{
    if (l.size() != n.size()) throw std::invalid_argument("pencil dimension does not match the grid");
    for (std::size_t k = 0; k < l.size(); ++k)
        if (l[k] <= 0 || l[k] >= n[k])
            throw std::invalid_argument("pencil must satisfy 0 < L_k < N_k, got L=" + to_string(l) +
                                        " N=" + to_string(n));
}

namespace detail {

/// Hankel matrix of directions level..D-1 for the sub-array starting at the
/// flat offset base.
inline CMatrix hankel_level(const MeasurementArray& y, const Dims& l, std::size_t level, long base)
{
    const Dims& n = y.grid().max_index();
    long stride = 1;
    for (std::size_t j = level + 1; j < n.size(); ++j) stride *= n[j] + 1L;

    const int rows = l[level] + 1;
    const int cols = n[level] - l[level] + 1;
    if (level + 1 == n.size()) {
        CMatrix h(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) h(i, j) = y[base + i + j];
        return h;
    }

    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(n[level]) + 1);
    for (int t = 0; t <= n[level]; ++t) blocks.push_back(hankel_level(y, l, level + 1, base + t * stride));

    const long br = blocks.front().rows();
    const long bc = blocks.front().cols();
    CMatrix h(rows * br, cols * bc);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) h.block(i * br, j * bc, br, bc) = blocks[static_cast<std::size_t>(i + j)];
    return h;
}

}  // namespace detail

inline MultiLevelHankel build_hankel(const MeasurementArray& y, const Dims& l)
{
    const Dims& n = y.grid().max_index();
    check_pencil(l, n);
    return {detail::hankel_level(y, l, 0, 0), l, n};
}

/// H[flatten(a, L), flatten(b, N-L)] = y(a + b), entry by entry.
inline CMatrix hankel_by_index_law(const MeasurementArray& y, const Dims& l)
{
    const Dims& n = y.grid().max_index();
    check_pencil(l, n);
    const Dims m = difference(n, l);
    CMatrix h(count(l), count(m));
    std::vector<int> sum(n.size());
    for (MultiIndexRange a(l); !a.done(); a.next()) {
        const long row = flatten(*a, l);
        for (MultiIndexRange b(m); !b.done(); b.next()) {
            for (std::size_t k = 0; k < n.size(); ++k) sum[k] = (*a)[k] + (*b)[k];
            h(row, flatten(*b, m)) = y.at(sum);
        }
    }
    return h;
}

/// Phi^L: column j is the imaging vector of the j-th support point.
inline CMatrix build_phi(const FrequencySupport& s, const Dims& l)
{
    CMatrix phi(count(l), static_cast<long>(s.size()));
    for (std::size_t j = 0; j < s.size(); ++j) phi.col(static_cast<long>(j)) = imaging_vector(s[j], l);
    return phi;
}

struct VandermondeFactors {
    CMatrix phi_rows;  // Phi^L
    CVector weights;   // diagonal of X
    CMatrix phi_cols;  // Phi^{N-L}

    /// Phi^L X (Phi^{N-L})^T, plain transpose.
    CMatrix product() const { return phi_rows * weights.asDiagonal() * phi_cols.transpose(); }
};

inline VandermondeFactors vandermonde_factors(const SpectralModel& model, const Dims& l, const Dims& n)
{
    check_pencil(l, n);
    CVector x(static_cast<long>(model.sparsity()));
    for (std::size_t j = 0; j < model.sparsity(); ++j) x(static_cast<long>(j)) = model.amplitudes[j];
    return {build_phi(model.support, l), x, build_phi(model.support, difference(n, l))};
}

}  // namespace musicnd
