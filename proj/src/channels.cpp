// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/channels.hpp"

#include <cmath>

namespace irsmimo {

namespace {

enum StreamTag : std::uint64_t
{
    tag_h = 0x68,
    tag_R = 0x52,
    tag_t = 0x74,
};

std::optional<CMatrix> optional_sqrt(const CMatrix &C)
{
    if (C.isIdentity(0.0))
        return std::nullopt;
    return hermitian_sqrt(C);
}

CVector times_sqrt(const std::optional<CMatrix> &S, CVector x)
{
    if (S)
        return *S * x;
    return x;
}

CVector gaussian_or_zero(Eigen::Index n, double variance, Rng &rng)
{
    if (variance > 0.0)
        return sample_complex_gaussian(n, variance, rng);
    return CVector::Zero(n);
}

} // namespace

ChannelSampler::ChannelSampler(const CovarianceSet &cov, const ReflectionPattern &phi)
    : M_(cov.bs_antennas()), N_(cov.irs_elements()), phi_(phi.coefficients()), beta_BU_(cov.beta_BU),
      beta_BI_(cov.beta_BI), beta_IU_(cov.beta_IU)
{
    cov.validate();
    if (phi.size() != N_)
        throw std::invalid_argument("ChannelSampler: pattern length differs from IRS size");
    sqrt_CB_ = optional_sqrt(cov.C_B);
    sqrt_CI_ = optional_sqrt(cov.C_I);
    for (std::size_t k = 0; k < cov.users(); ++k) {
        sqrt_CBk_.push_back(optional_sqrt(cov.C_B_k[k]));
        sqrt_CIk_.push_back(optional_sqrt(cov.C_I_k[k]));
    }
}

CVector ChannelSampler::direct(std::uint64_t block_seed, std::size_t k) const
{
    Rng rng(derive_seed(block_seed, tag_h, k));
    return times_sqrt(sqrt_CBk_[k], gaussian_or_zero(M_, beta_BU_[k], rng));
}

CMatrix ChannelSampler::r_tilde(std::uint64_t block_seed) const
{
    Rng rng(derive_seed(block_seed, tag_R));
    if (beta_BI_ > 0.0)
        return sample_complex_gaussian(M_, N_, beta_BI_, rng);
    return CMatrix::Zero(M_, N_);
}

CVector ChannelSampler::user_irs(std::uint64_t block_seed, std::size_t k) const
{
    Rng rng(derive_seed(block_seed, tag_t, k));
    return times_sqrt(sqrt_CIk_[k], gaussian_or_zero(N_, beta_IU_[k], rng));
}

ChannelRealization ChannelSampler::sample(std::uint64_t block_seed) const
{
    ChannelRealization out;
    CMatrix R = r_tilde(block_seed);
    if (sqrt_CB_)
        R = *sqrt_CB_ * R;
    if (sqrt_CI_)
        R = R * *sqrt_CI_;
    out.R = std::move(R);

    const double scale = 1.0 / std::sqrt(static_cast<double>(N_));
    for (std::size_t k = 0; k < users(); ++k) {
        out.h.push_back(direct(block_seed, k));
        out.t.push_back(user_irs(block_seed, k));
        out.c.push_back(out.h[k] + out.R * phi_.cwiseProduct(out.t[k]));
        out.c_normalized.push_back(out.c[k] * scale);
    }
    return out;
}

std::vector<CVector> ChannelSampler::sample_effective(std::uint64_t block_seed) const
{
    const CMatrix Rt = r_tilde(block_seed);
    std::vector<CVector> c;
    c.reserve(users());
    for (std::size_t k = 0; k < users(); ++k) {
        const CVector reflected = times_sqrt(sqrt_CB_, Rt * times_sqrt(sqrt_CI_, phi_.cwiseProduct(user_irs(block_seed, k))));
        c.push_back(direct(block_seed, k) + reflected);
    }
    return c;
}

ChannelRealization sample_block(const CovarianceSet &cov, const ReflectionPattern &phi, Rng &rng)
{
    return ChannelSampler(cov, phi).sample(rng());
}

SvdPathSampler::SvdPathSampler(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k)
    : M_(cov.bs_antennas()), beta_BI_(cov.beta_BI), beta_IU_(cov.beta_IU.at(k))
{
    if (phi.size() != cov.irs_elements())
        throw std::invalid_argument("SvdPathSampler: pattern length differs from IRS size");
    const CMatrix L = hermitian_sqrt(cov.C_I) * phi.coefficients().asDiagonal() * hermitian_sqrt(cov.C_I_k[k]);
    singulars_ = svd(L).singulars;
    if (!singulars_.allFinite())
        throw NumericalError("SvdPathSampler: SVD failed");
}

CVector SvdPathSampler::sample(Rng &rng) const
{
    const Eigen::Index N = singulars_.size();
    // R̄_k = R̃U_k and t̄_k = G_kᴴt̃_k are again i.i.d. with the same variances.
    const CMatrix R_bar = beta_BI_ > 0.0 ? sample_complex_gaussian(M_, N, beta_BI_, rng) : CMatrix::Zero(M_, N);
    const CVector t_bar = gaussian_or_zero(N, beta_IU_, rng);
    return R_bar * singulars_.cast<cdouble>().cwiseProduct(t_bar) / std::sqrt(static_cast<double>(N));
}

CVector sample_q_svd_path(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k, Rng &rng)
{
    return SvdPathSampler(cov, phi, k).sample(rng);
}

} // namespace irsmimo
