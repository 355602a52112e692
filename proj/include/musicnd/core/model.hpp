// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "musicnd/core/multi_index.hpp"
#include "musicnd/core/torus.hpp"
#include "musicnd/linalg.hpp"

namespace musicnd {

/// Integer sampling lattice 0 <= n <= N.
class SamplingGrid {
public:
    SamplingGrid() = default;
    explicit SamplingGrid(Dims n) : n_(std::move(n))
    {
        if (n_.empty()) throw std::invalid_argument("sampling grid needs at least one direction");
        for (int v : n_)
            if (v < 1) throw std::invalid_argument("sampling grid needs N_k >= 1");
    }

    std::size_t dim() const { return n_.size(); }
    const Dims& max_index() const { return n_; }
    int operator[](std::size_t k) const { return n_[k]; }
    long sample_count() const { return count(n_); }
    /// One Rayleigh length along direction k, 1/N_k.
    double rayleigh_length(std::size_t k) const { return 1.0 / n_[k]; }

    friend bool operator==(const SamplingGrid&, const SamplingGrid&) = default;

private:
    Dims n_;
};

/// Complex amplitudes, all nonzero.
class Amplitudes {
public:
    Amplitudes() = default;
    explicit Amplitudes(std::vector<cplx> values) : values_(std::move(values))
    {
        for (const auto& v : values_)
            if (!(std::abs(v) > 0.0) || !std::isfinite(std::abs(v)))
                throw std::invalid_argument("amplitudes must be finite and nonzero");
    }

    std::size_t size() const { return values_.size(); }
    const cplx& operator[](std::size_t j) const { return values_[j]; }
    const std::vector<cplx>& values() const { return values_; }

    double x_max() const
    {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }
    double x_min() const
    {
        if (values_.empty()) return 0.0;
        double m = std::abs(values_.front());
        for (const auto& v : values_) m = std::min(m, std::abs(v));
        return m;
    }
    double dynamic_range() const { return x_max() / x_min(); }

private:
    std::vector<cplx> values_;
};

/// Sparse spectral model: support S with amplitudes x, |S| = |x|.
struct SpectralModel {
    FrequencySupport support;
    Amplitudes amplitudes;

    SpectralModel() = default;
    SpectralModel(FrequencySupport s, Amplitudes x) : support(std::move(s)), amplitudes(std::move(x))
    {
        if (support.size() != amplitudes.size())
            throw std::invalid_argument("support and amplitude sizes differ");
    }

    std::size_t sparsity() const { return support.size(); }
    std::size_t dim() const { return support.dim(); }
};

/// Samples y(n), 0 <= n <= N, stored in flatten order.
class MeasurementArray {
public:
    MeasurementArray() = default;
    MeasurementArray(SamplingGrid grid, std::vector<cplx> data) : grid_(std::move(grid)), data_(std::move(data))
    {
        if (static_cast<long>(data_.size()) != grid_.sample_count())
            throw std::invalid_argument("measurement size does not match the sampling grid");
    }
    explicit MeasurementArray(SamplingGrid grid)
        : grid_(std::move(grid)), data_(static_cast<std::size_t>(grid_.sample_count()))
    {}

    const SamplingGrid& grid() const { return grid_; }
    std::size_t dim() const { return grid_.dim(); }
    std::size_t size() const { return data_.size(); }
    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    const cplx& operator[](long flat) const { return data_[static_cast<std::size_t>(flat)]; }
    cplx& operator[](long flat) { return data_[static_cast<std::size_t>(flat)]; }
    const cplx& at(std::span<const int> n) const { return data_[static_cast<std::size_t>(flatten(n, grid_.max_index()))]; }

    double frobenius_norm() const
    {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    friend MeasurementArray operator+(const MeasurementArray& a, const MeasurementArray& b)
    {
        if (!(a.grid_ == b.grid_)) throw std::invalid_argument("grid mismatch");
        MeasurementArray r = a;
        for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
        return r;
    }

    friend MeasurementArray operator*(cplx c, const MeasurementArray& a)
    {
        MeasurementArray r = a;
        for (auto& v : r.data_) v *= c;
        return r;
    }

private:
    SamplingGrid grid_;
    std::vector<cplx> data_;
};

namespace detail {
/// Rows k: e^{2 pi i n w_k} for n = 0..max_index[k].
inline std::vector<std::vector<cplx>> axis_phases(const TorusPoint& w, const Dims& max_index, double sign = 1.0)
{
    std::vector<std::vector<cplx>> rows(max_index.size());
    for (std::size_t k = 0; k < max_index.size(); ++k) {
        rows[k].resize(static_cast<std::size_t>(max_index[k]) + 1);
        // evaluated per index rather than by repeated products, so no drift
        for (int n = 0; n <= max_index[k]; ++n) rows[k][static_cast<std::size_t>(n)] = unit_phase(sign * n * w[k]);
    }
    return rows;
}

/// Kronecker product of the per-axis phase rows in flatten order.
inline void kron_rows(const std::vector<std::vector<cplx>>& rows, cplx* out)
{
    out[0] = 1.0;
    long len = 1;
    for (const auto& row : rows) {
        const long e = static_cast<long>(row.size());
        // expand in place from the back so earlier entries stay intact
        for (long i = len - 1; i >= 0; --i) {
            const cplx base = out[i];
            for (long n = e - 1; n >= 0; --n) out[i * e + n] = base * row[static_cast<std::size_t>(n)];
        }
        len *= e;
    }
}
}  // namespace detail

/// phi^L(w): entry m is e^{2 pi i n . w} with n = unflatten(m, L).
inline CVector imaging_vector(const TorusPoint& w, const Dims& l)
{
    if (w.dim() != l.size()) throw std::invalid_argument("dimension mismatch");
    for (int v : l)
        if (v < 0) throw std::invalid_argument("imaging vector needs L_k >= 0");
    CVector phi(count(l));
    detail::kron_rows(detail::axis_phases(w, l), phi.data());
    return phi;
}

/// y(n) = sum_j x_j e^{2 pi i w^j . n} on the whole grid.
inline MeasurementArray synthesize(const SpectralModel& model, const SamplingGrid& grid)
{
    if (model.sparsity() > 0 && model.dim() != grid.dim()) throw std::invalid_argument("dimension mismatch");
    MeasurementArray y(grid);
    CVector phi(grid.sample_count());
    for (std::size_t j = 0; j < model.sparsity(); ++j) {
        detail::kron_rows(detail::axis_phases(model.support[j], grid.max_index()), phi.data());
        const cplx x = model.amplitudes[j];
        for (long m = 0; m < phi.size(); ++m) y[m] += x * phi(m);
    }
    return y;
}

}  // namespace musicnd
