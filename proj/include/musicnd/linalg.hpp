// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace musicnd {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// e^{2 pi i x}
inline cplx unit_phase(double x)
{
    const double a = kTwoPi * x;
    return {std::cos(a), std::sin(a)};
}

struct Svd {
    CMatrix U;      // full left factor
    RVector sigma;  // descending
    CMatrix V;      // thin right factor
};

/// Dense complex SVD. U is square (all left singular vectors), sigma is sorted
/// in descending order.
inline Svd svd(const CMatrix& a)
{
    Eigen::BDCSVD<CMatrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeThinV);
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

inline RVector singular_values(const CMatrix& a)
{
    Eigen::BDCSVD<CMatrix> dec(a);
    return dec.singularValues();
}

inline double spectral_norm(const CMatrix& a)
{
    if (a.size() == 0) return 0.0;
    return singular_values(a)(0);
}

}  // namespace musicnd
