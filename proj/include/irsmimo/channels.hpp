// SPDX-License-Identifier: Apache-2.0
//
// Per-block channel draws and effective-channel assembly.

#ifndef IRSMIMO_CHANNELS_HPP
#define IRSMIMO_CHANNELS_HPP

#include "irsmimo/covariance.hpp"

#include <optional>
#include <vector>

namespace irsmimo {

/// One coherence block. c[k] = h[k] + R diag(φ) t[k], c_normalized[k] = c[k]/√N.
struct ChannelRealization
{
    std::vector<CVector> h;
    CMatrix R;
    std::vector<CVector> t;
    std::vector<CVector> c;
    std::vector<CVector> c_normalized;
};

/// Samples blocks for a fixed (CovarianceSet, φ). Square roots are computed once.
///
/// h_k = (C_k^B)^{1/2} h̃_k, h̃_k ~ CN(0, β_k^BU I); R = (C^B)^{1/2} R̃ (C^I)^{1/2}, R̃ ~ CN(0, β^BI)
/// per entry; t_k = (C_k^I)^{1/2} t̃_k, t̃_k ~ CN(0, β_k^IU I). Every object has its own stream
/// derived from the block seed, so the full and the effective-only paths give the same c.
class ChannelSampler
{
  public:
    ChannelSampler(const CovarianceSet &cov, const ReflectionPattern &phi);

    ChannelRealization sample(std::uint64_t block_seed) const;

    /// Effective channels c_k only; R is never formed.
    std::vector<CVector> sample_effective(std::uint64_t block_seed) const;

    std::size_t users() const { return beta_BU_.size(); }
    Eigen::Index bs_antennas() const { return M_; }
    Eigen::Index irs_elements() const { return N_; }

  private:
    CVector direct(std::uint64_t block_seed, std::size_t k) const;
    CMatrix r_tilde(std::uint64_t block_seed) const;
    CVector user_irs(std::uint64_t block_seed, std::size_t k) const;

    Eigen::Index M_ = 0;
    Eigen::Index N_ = 0;
    CVector phi_;
    // Empty optionals stand for identity square roots.
    std::optional<CMatrix> sqrt_CB_;
    std::optional<CMatrix> sqrt_CI_;
    std::vector<std::optional<CMatrix>> sqrt_CBk_;
    std::vector<std::optional<CMatrix>> sqrt_CIk_;
    std::vector<double> beta_BU_;
    double beta_BI_ = 0.0;
    std::vector<double> beta_IU_;
};

/// One block drawn with a seed taken from rng.
ChannelRealization sample_block(const CovarianceSet &cov, const ReflectionPattern &phi, Rng &rng);

/// Reflected part of user k's channel through the SVD route, whitened by (C^B)^{-1/2} and
/// divided by √N: q_k = R̄_k Λ_k t̄_k / √N with U_k Λ_k G_kᴴ = (C^I)^{1/2} diag(φ) (C_k^I)^{1/2}.
CVector sample_q_svd_path(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k, Rng &rng);

/// Same route with the SVD done once.
class SvdPathSampler
{
  public:
    SvdPathSampler(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k);

    CVector sample(Rng &rng) const;

  private:
    Eigen::Index M_;
    RVector singulars_;
    double beta_BI_;
    double beta_IU_;
};

} // namespace irsmimo

#endif
