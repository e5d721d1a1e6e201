// SPDX-License-Identifier: Apache-2.0
// Shared fixtures for the unit tests.
#pragma once

#include "irsmimo/covariance.hpp"

#include <random>

namespace fixtures {

using namespace irsmimo;

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    return sample_complex_gaussian(rows, cols, 1.0, rng);
}

inline CMatrix random_psd(Eigen::Index n, Rng &rng)
{
    const CMatrix X = random_matrix(n, n, rng);
    return X * X.adjoint() / static_cast<double>(n);
}

inline cdouble random_coefficient(Rng &rng, double max_abs = 0.8)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(max_abs * u(rng), 6.283185307179586 * u(rng));
}

inline CVector random_phi(Eigen::Index n, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CVector phi(n);
    for (Eigen::Index i = 0; i < n; ++i)
        phi(i) = std::polar(u(rng), 6.283185307179586 * u(rng));
    return phi;
}

// Model-1 covariance set with random coefficients and the given gains.
inline CovarianceSet random_model1(Eigen::Index M, Eigen::Index N, std::size_t K, Rng &rng, double beta_BU = 0.0,
                                   double beta_BI = 1.0, double beta_IU = 1.0)
{
    CovarianceSet cov;
    cov.C_B = build_exponential_cov(M, random_coefficient(rng));
    cov.C_I = build_exponential_cov(N, random_coefficient(rng));
    for (std::size_t k = 0; k < K; ++k) {
        cov.C_B_k.push_back(build_exponential_cov(M, random_coefficient(rng)));
        cov.C_I_k.push_back(build_exponential_cov(N, random_coefficient(rng)));
        cov.beta_BU.push_back(beta_BU);
        cov.beta_IU.push_back(beta_IU);
    }
    cov.beta_BI = beta_BI;
    cov.validate();
    return cov;
}

} // namespace fixtures
