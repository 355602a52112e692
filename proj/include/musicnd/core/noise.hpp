// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "musicnd/core/model.hpp"
#include "musicnd/core/random.hpp"

namespace musicnd {

enum class NoiseKind {
    real_gaussian,     // e ~ N(0, sigma^2), imaginary part zero
    complex_gaussian,  // e ~ N(0, sigma^2) + i N(0, sigma^2)
};

/// i.i.d. Gaussian noise array on the grid of y, reproducible from seed.
inline MeasurementArray gaussian_noise(const SamplingGrid& grid, double sigma, NoiseKind kind, std::uint64_t seed)
{
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise level must be nonnegative");
    MeasurementArray e(grid);
    if (sigma == 0.0) return e;
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (auto& v : e.data()) {
        const double re = normal(rng);
        const double im = kind == NoiseKind::complex_gaussian ? normal(rng) : 0.0;
        v = {re, im};
    }
    return e;
}

/// y^e = y + e.
inline MeasurementArray add_noise(const MeasurementArray& y, double sigma, NoiseKind kind, std::uint64_t seed)
{
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise level must be nonnegative");
    if (sigma == 0.0) return y;
    return y + gaussian_noise(y.grid(), sigma, kind, seed);
}

/// sigma such that complex noise has E||e||_F / ||y||_F = nsr, using
/// E||e||_F ~ sigma sqrt(2 prod(N_k + 1)).
inline double nsr_to_sigma(double nsr, const MeasurementArray& y)
{
    if (!(nsr >= 0.0)) throw std::invalid_argument("NSR must be nonnegative");
    const double norm = y.frobenius_norm();
    if (!(norm > 0.0)) throw std::domain_error("NSR is undefined for a zero signal");
    return nsr * norm / std::sqrt(2.0 * static_cast<double>(y.grid().sample_count()));
}

/// The inverse map: NSR implied by a complex noise level sigma.
inline double sigma_to_nsr(double sigma, const MeasurementArray& y)
{
    return sigma * std::sqrt(2.0 * static_cast<double>(y.grid().sample_count())) / y.frobenius_norm();
}

}  // namespace musicnd
