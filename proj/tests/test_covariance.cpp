// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "irsmimo/channels.hpp"
#include "irsmimo/covariance.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace irsmimo;

TEST_CASE("build_exponential_cov")
{
    CHECK(build_exponential_cov(3, 0.0) == CMatrix::Identity(3, 3));

    const CMatrix C = build_exponential_cov(3, 0.5);
    const double expected[3][3] = {{1, .5, .25}, {.5, 1, .5}, {.25, .5, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(C(i, j) - expected[i][j]) < 1e-15);

    const cdouble c = std::polar(0.4, M_PI / 6.0);
    const CMatrix D = build_exponential_cov(64, c);
    CHECK(hermitian_defect(D) == 0.0);
    for (int i = 0; i < 64; ++i)
        CHECK(std::abs(D(i, i) - 1.0) < 1e-12);
    // Lower triangle holds c^(i-j).
    CHECK(std::abs(D(5, 2) - std::pow(c, 3)) < 1e-14);
    CHECK(hermitian_eig(D).eigenvalues.minCoeff() > 0.0);

    CHECK_THROWS_AS(build_exponential_cov(3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_exponential_cov(3, cdouble(0.8, 0.8)), std::invalid_argument);
}

TEST_CASE("build_sinc_cov")
{
    // Half-wavelength spacing on a line: sinc zeros at integers.
    const CMatrix L = build_sinc_cov(6, {1, 6}, 0.5, 1.0);
    CHECK((L - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-15);

    const CMatrix Q = build_sinc_cov(2, {1, 2}, 0.25, 1.0);
    CHECK(std::abs(Q(0, 1) - 2.0 / M_PI) < 1e-15);

    const CMatrix G = build_sinc_cov(100, {10, 10}, 0.25, 1.0);
    CHECK(hermitian_defect(G) == 0.0);
    for (int i = 0; i < 100; ++i)
        CHECK(std::abs(G(i, i) - 1.0) < 1e-15);
    CHECK(hermitian_eig(G).eigenvalues.minCoeff() >= -1e-9);
    CHECK_NOTHROW(hermitian_sqrt(G));

    CHECK_THROWS_AS(build_sinc_cov(7, {2, 3}, 0.25, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_sinc_cov(6, {2, 3}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("near_square_grid")
{
    CHECK(near_square_grid(100).rows == 10);
    CHECK(near_square_grid(1280).rows * near_square_grid(1280).cols == 1280);
    CHECK(near_square_grid(1280).rows == 32);
    CHECK(near_square_grid(7).rows == 1);
}

TEST_CASE("path_loss")
{
    CHECK(path_loss(1.0, 1.0, 0.01, 2.2) == 0.01);
    CHECK(path_loss(100.0, 1.0, 0.01, 2.2) == doctest::Approx(3.981e-7).epsilon(1e-3));
    CHECK(path_loss(10.0, 1.0, 0.01, 2.1) == doctest::Approx(7.943e-5).epsilon(1e-3));
    CHECK_THROWS_AS(path_loss(0.0, 1.0, 0.01, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(path_loss(1.0, -1.0, 0.01, 2.0), std::invalid_argument);
}

TEST_CASE("CovarianceSet validation")
{
    CovarianceSet cov = CovarianceSet::identity(3, 4, {0.1}, 0.2, {0.3});
    CHECK_NOTHROW(cov.validate());
    cov.C_B(0, 0) = 1.1;
    CHECK_THROWS_AS(cov.validate(), std::invalid_argument);
    cov.C_B(0, 0) = 1.0;
    cov.C_B(0, 1) = 0.5; // not Hermitian
    CHECK_THROWS_AS(cov.validate(), std::invalid_argument);
    // Unit diagonal and Hermitian but indefinite: v = (1, -1, 1) gives vᵀCv = 3 - 5.4.
    cov.C_B << 1.0, 0.9, -0.9, 0.9, 1.0, 0.9, -0.9, 0.9, 1.0;
    CHECK_THROWS_AS(cov.validate(), std::invalid_argument);
    cov = CovarianceSet::identity(3, 4, {0.1}, 0.2, {0.3});
    cov.beta_IU[0] = -1.0;
    CHECK_THROWS_AS(cov.validate(), std::invalid_argument);
}

TEST_CASE("effective_cov_V closed forms")
{
    const CovarianceSet cov = CovarianceSet::identity(4, 6, {0.5, 0.0}, 2.0, {3.0, 1.0});
    const CMatrix V = effective_cov_V(cov, 0, ReflectionPattern::all_ones(6));
    CHECK((V - (0.5 + 2.0 * 3.0 * 6.0) * CMatrix::Identity(4, 4)).norm() < 1e-12);
    CHECK(effective_cov_V(cov, 1, ReflectionPattern::zeros(6)).norm() == 0.0);
    CHECK_THROWS_AS(effective_cov_V(cov, 0, ReflectionPattern::all_ones(5)), std::invalid_argument);
}

TEST_CASE("D_k and C̄_k with identity correlations")
{
    Rng rng(21);
    const CovarianceSet cov = CovarianceSet::identity(3, 5, {0.0}, 1.0, {1.0});
    const CVector phi = fixtures::random_phi(5, rng);
    const CMatrix D = dk_matrix(cov, 0, ReflectionPattern(phi));
    CHECK((D - CMatrix(phi.cwiseAbs2().cast<cdouble>().asDiagonal())).norm() < 1e-14);
    CHECK(cbar_matrix(cov, 0) == CMatrix::Identity(5, 5));
    CHECK(dk_matrix(cov, 0, ReflectionPattern::zeros(5)).norm() == 0.0);
}

TEST_CASE("tr(D_k) equals the C̄_k quadratic form")
{
    Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const CovarianceSet cov = fixtures::random_model1(3, 12, 2, rng);
        const CVector phi = fixtures::random_phi(12, rng);
        for (std::size_t k = 0; k < 2; ++k) {
            const double lhs = dk_matrix(cov, k, ReflectionPattern(phi)).trace().real();
            // Direct double sum Σ_mn conj(φ_m) C^I_mn C^I_k,nm φ_n as an independent evaluation.
            cdouble rhs = 0.0;
            for (int m = 0; m < 12; ++m)
                for (int n = 0; n < 12; ++n)
                    rhs += std::conj(phi(m)) * cov.C_I(m, n) * cov.C_I_k[k](n, m) * phi(n);
            CHECK(std::abs(lhs - rhs.real()) <= 1e-10 * std::abs(rhs.real()));
            CHECK(std::abs(quadratic_form(cbar_matrix(cov, k), phi) - rhs.real()) <= 1e-10 * std::abs(rhs.real()));
        }
    }
}

TEST_CASE("C̄_k is Hermitian positive definite")
{
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const CovarianceSet cov = fixtures::random_model1(2, 10, 1, rng);
        const CMatrix Cbar = cbar_matrix(cov, 0);
        CHECK(hermitian_defect(Cbar) < 1e-15);
        CHECK(hermitian_eig(Cbar).eigenvalues.minCoeff() > 0.0);
    }
}

TEST_CASE("effective_cov_V matches sampled channels")
{
    Rng rng(24);
    const CovarianceSet cov = fixtures::random_model1(8, 32, 1, rng, 0.3, 1.0, 1.0);
    const ReflectionPattern phi(fixtures::random_phi(32, rng));
    const ChannelSampler sampler(cov, phi);
    const int S = 10000;
    CMatrix acc = CMatrix::Zero(8, 8);
    for (int s = 0; s < S; ++s) {
        const CVector c = sampler.sample_effective(rng())[0];
        acc += c * c.adjoint();
    }
    acc /= static_cast<double>(S);
    const CMatrix V = effective_cov_V(cov, 0, phi);
    CHECK((acc - V).norm() < 0.05 * V.norm());
}
