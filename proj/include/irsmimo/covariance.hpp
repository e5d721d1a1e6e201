// SPDX-License-Identifier: Apache-2.0
//
// Second-order statistics of the IRS-assisted uplink: spatial correlation matrices,
// large-scale path losses, and the matrices derived from them for a given IRS pattern.

#ifndef IRSMIMO_COVARIANCE_HPP
#define IRSMIMO_COVARIANCE_HPP

#include "irsmimo/numeric.hpp"
#include "irsmimo/reflection.hpp"

#include <vector>

namespace irsmimo {

/// Correlation matrices and path-loss gains for one covariance interval.
///
/// C_B is the BS-side correlation of the IRS link, C_B_k[k] the BS-side correlation of user
/// k's direct link, C_I the IRS-side correlation towards the BS and C_I_k[k] the IRS-side
/// correlation towards user k. Path losses are linear power gains.
struct CovarianceSet
{
    CMatrix C_B;
    std::vector<CMatrix> C_B_k;
    CMatrix C_I;
    std::vector<CMatrix> C_I_k;
    std::vector<double> beta_BU;
    double beta_BI = 0.0;
    std::vector<double> beta_IU;

    std::size_t users() const { return C_B_k.size(); }
    Eigen::Index bs_antennas() const { return C_B.rows(); }
    Eigen::Index irs_elements() const { return C_I.rows(); }

    /// Throws std::invalid_argument when dimensions disagree, a matrix is not a unit-diagonal
    /// Hermitian PSD correlation matrix, or a path loss is negative.
    void validate() const;

    /// All correlations identity with the given gains.
    static CovarianceSet identity(Eigen::Index M, Eigen::Index N, std::vector<double> beta_BU,
                                  double beta_BI, std::vector<double> beta_IU);
};

/// Exponential correlation: [C]_{ij} = c^{i-j} for i ≥ j, Hermitian completion above.
CMatrix build_exponential_cov(Eigen::Index n, cdouble c);

struct GridShape
{
    Eigen::Index rows = 1;
    Eigen::Index cols = 1;
};

/// Grid with rows = largest divisor of n not above √n.
GridShape near_square_grid(Eigen::Index n);

/// Isotropic-scattering correlation of a planar rectangular array,
/// [C]_{mn} = sinc(2‖u_m − u_n‖/λ) with sinc(x) = sin(πx)/(πx).
CMatrix build_sinc_cov(Eigen::Index n, GridShape grid, double spacing, double wavelength);

/// β₀ (d/d₀)^{-α}, linear.
double path_loss(double d, double d0, double beta0, double alpha);

/// C̄_k = C_I ∘ (C_I_k)ᵀ.
CMatrix cbar_matrix(const CovarianceSet &cov, std::size_t k);

/// D_k(φ) = C_I^{1/2} diag(φ) C_I_k diag(φ)ᴴ C_I^{1/2}.
CMatrix dk_matrix(const CovarianceSet &cov, std::size_t k, const ReflectionPattern &phi);

/// φᴴ A φ for Hermitian A (imaginary rounding discarded).
double quadratic_form(const CMatrix &A, const CVector &phi);

/// Covariance of user k's effective channel,
/// V_k = β_k^BU C_k^B + β^BI β_k^IU (φᴴ C̄_k φ) C^B.
CMatrix effective_cov_V(const CovarianceSet &cov, std::size_t k, const ReflectionPattern &phi);

} // namespace irsmimo

#endif
