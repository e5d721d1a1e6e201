// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "irsmimo/channels.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace irsmimo;

TEST_CASE("zero gains give zero channels")
{
    const CovarianceSet cov = CovarianceSet::identity(4, 8, {0.0, 0.0}, 0.0, {1.0, 1.0});
    Rng rng(1);
    const ChannelRealization r = sample_block(cov, ReflectionPattern::all_ones(8), rng);
    for (const auto &c : r.c)
        CHECK(c.norm() == 0.0);
}

TEST_CASE("exact assembly from per-element reflecting channels")
{
    Rng rng(2);
    const CovarianceSet cov = fixtures::random_model1(5, 9, 3, rng, 0.7, 1.3, 0.9);
    const CVector phi = fixtures::random_phi(9, rng);
    const ChannelRealization r = sample_block(cov, ReflectionPattern(phi), rng);
    for (std::size_t k = 0; k < 3; ++k) {
        CVector sum = r.h[k];
        for (int n = 0; n < 9; ++n)
            sum += phi(n) * r.t[k](n) * r.R.col(n); // g_{k,n} = t_{k,n} r_n
        CHECK((r.c[k] - sum).norm() <= 1e-12 * sum.norm());
        CHECK((r.c_normalized[k] * 3.0 - r.c[k]).norm() <= 1e-12 * sum.norm());
    }
}

TEST_CASE("full and effective-only paths agree")
{
    Rng rng(3);
    const CovarianceSet cov = fixtures::random_model1(6, 10, 2, rng, 0.2);
    const ChannelSampler sampler(cov, ReflectionPattern(fixtures::random_phi(10, rng)));
    for (std::uint64_t seed : {1ull, 2ull, 12345ull}) {
        const auto full = sampler.sample(seed);
        const auto fast = sampler.sample_effective(seed);
        for (std::size_t k = 0; k < 2; ++k)
            CHECK((full.c[k] - fast[k]).norm() <= 1e-12 * full.c[k].norm());
    }
}

TEST_CASE("adding users does not change other users' draws")
{
    const CovarianceSet one = CovarianceSet::identity(3, 5, {0.1}, 1.0, {1.0});
    const CovarianceSet two = CovarianceSet::identity(3, 5, {0.1, 0.1}, 1.0, {1.0, 1.0});
    const ReflectionPattern phi = ReflectionPattern::all_ones(5);
    CHECK(ChannelSampler(one, phi).sample_effective(77)[0] == ChannelSampler(two, phi).sample_effective(77)[0]);
}

TEST_CASE("identity covariances: normalized channel power")
{
    const int M = 8, N = 16;
    const double bBU = 0.5, bBI = 2.0, bIU = 1.5;
    const CovarianceSet cov = CovarianceSet::identity(M, N, {bBU}, bBI, {bIU});
    Rng rng(4);
    const CVector phi = fixtures::random_phi(N, rng);
    const ChannelSampler sampler(cov, ReflectionPattern(phi));
    double acc = 0.0;
    for (int b = 0; b < 1000; ++b)
        acc += sampler.sample_effective(rng())[0].squaredNorm() / (M * N);
    const double expected = bBU / N + bBI * bIU * phi.squaredNorm() / N;
    CHECK(acc / 1000.0 == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("different users are uncorrelated")
{
    Rng rng(5);
    const CovarianceSet cov = fixtures::random_model1(8, 32, 2, rng, 0.3);
    const ReflectionPattern phi(fixtures::random_phi(32, rng));
    const ChannelSampler sampler(cov, phi);
    CMatrix acc = CMatrix::Zero(8, 8);
    const int S = 10000;
    for (int s = 0; s < S; ++s) {
        const auto c = sampler.sample_effective(rng());
        acc += c[0] * c[1].adjoint();
    }
    acc /= static_cast<double>(S) * 32.0;
    CHECK(acc.norm() < 0.05 * effective_cov_V(cov, 0, phi).norm() / 32.0);
}

TEST_CASE("SVD-path sampler")
{
    Rng rng(6);
    const int M = 4, N = 64;
    CovarianceSet cov = fixtures::random_model1(M, N, 1, rng, 0.0, 2.0, 0.5);
    cov.C_B = CMatrix::Identity(M, M);

    CHECK(sample_q_svd_path(cov, ReflectionPattern::zeros(N), 0, rng).norm() == 0.0);

    const ReflectionPattern phi(fixtures::random_phi(N, rng));
    const ChannelSampler direct(cov, phi);
    const SvdPathSampler svd_path(cov, phi, 0);
    const int S = 100000;
    CMatrix second_svd = CMatrix::Zero(M, M), second_direct = CMatrix::Zero(M, M);
    CVector mean_svd = CVector::Zero(M), mean_direct = CVector::Zero(M);
    for (int s = 0; s < S; ++s) {
        const CVector q = svd_path.sample(rng);
        const CVector d = direct.sample_effective(rng())[0] / std::sqrt(static_cast<double>(N));
        mean_svd += q;
        mean_direct += d;
        second_svd += q * q.adjoint();
        second_direct += d * d.adjoint();
    }
    mean_svd /= S;
    mean_direct /= S;
    second_svd /= S;
    second_direct /= S;

    const double variance = cov.beta_BI * cov.beta_IU[0] * dk_matrix(cov, 0, phi).trace().real() / N;
    CHECK(second_svd.diagonal().real().mean() == doctest::Approx(variance).epsilon(0.03));
    CHECK((second_svd - second_direct).norm() < 0.03 * second_direct.norm());
    CHECK(mean_svd.norm() < 0.03 * std::sqrt(variance * M));
    CHECK(mean_direct.norm() < 0.03 * std::sqrt(variance * M));
}
