// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "irsmimo/rate.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace irsmimo;

namespace {

EstimationResult random_fixture(std::size_t K, Eigen::Index M, Rng &rng)
{
    EstimationResult r;
    for (std::size_t k = 0; k < K; ++k) {
        r.c_hat.push_back(sample_complex_gaussian(M, 1.0, rng));
        r.F.push_back(fixtures::random_psd(M, rng) * 0.1);
        r.mse_trace.push_back(r.F.back().trace().real());
    }
    return r;
}

// Independent evaluation of the MRC SINR with explicit index loops.
double brute_sinr(const EstimationResult &r, const std::vector<double> &p, double sigma2, double N, std::size_t k)
{
    const auto M = r.c_hat[k].size();
    auto inner = [&](const CVector &a, const CVector &b) {
        cdouble s = 0.0;
        for (Eigen::Index m = 0; m < M; ++m)
            s += std::conj(a(m)) * b(m);
        return s;
    };
    const double g = inner(r.c_hat[k], r.c_hat[k]).real();
    double den = sigma2 * g / N;
    for (std::size_t j = 0; j < r.c_hat.size(); ++j) {
        if (j != k)
            den += p[j] * std::norm(inner(r.c_hat[k], r.c_hat[j]));
        cdouble q = 0.0;
        for (Eigen::Index a = 0; a < M; ++a)
            for (Eigen::Index b = 0; b < M; ++b)
                q += std::conj(r.c_hat[k](a)) * r.F[j](a, b) * r.c_hat[k](b);
        den += p[j] * q.real();
    }
    return p[k] * g * g / den;
}

} // namespace

TEST_CASE("single user with perfect estimation")
{
    Rng rng(1);
    EstimationResult r;
    r.c_hat.push_back(sample_complex_gaussian(5, 1.0, rng));
    r.F.push_back(CMatrix::Zero(5, 5));
    const std::vector<double> p{0.3};
    const auto gamma = mrc_sinr(r, p, 0.2, 10);
    CHECK(gamma[0] == doctest::Approx(0.3 * r.c_hat[0].squaredNorm() * 10 / 0.2));
}

TEST_CASE("symmetric orthogonal users get equal SINR")
{
    EstimationResult r;
    for (int k = 0; k < 3; ++k) {
        r.c_hat.push_back(CVector::Unit(3, k) * cdouble(0.0, 2.0));
        r.F.push_back(CMatrix::Zero(3, 3));
    }
    const std::vector<double> p{1.0, 1.0, 1.0};
    const auto gamma = mrc_sinr(r, p, 0.5, 4);
    CHECK(gamma[0] == doctest::Approx(gamma[1]));
    CHECK(gamma[1] == doctest::Approx(gamma[2]));
}

TEST_CASE("SINR matches brute-force evaluation")
{
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const EstimationResult r = random_fixture(4, 6, rng);
        const std::vector<double> p{0.1, 0.7, 1.3, 0.4};
        const auto gamma = mrc_sinr(r, p, 0.05, 30);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(std::abs(gamma[k] - brute_sinr(r, p, 0.05, 30, k)) <= 1e-12 * gamma[k]);
    }
}

TEST_CASE("SINR is scale-consistent and handles zero estimates")
{
    Rng rng(3);
    EstimationResult r = random_fixture(3, 4, rng);
    const std::vector<double> p{1.0, 2.0, 3.0};
    const auto before = mrc_sinr(r, p, 0.1, 8);
    const cdouble a(0.3, -1.7);
    for (std::size_t k = 0; k < 3; ++k) {
        r.c_hat[k] *= a;
        r.F[k] *= std::norm(a);
    }
    const auto after = mrc_sinr(r, p, 0.1 * std::norm(a), 8);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(after[k] - before[k]) <= 1e-10 * before[k]);

    r.c_hat[1].setZero();
    CHECK(mrc_sinr(r, p, 0.1, 8)[1] == 0.0);
    CHECK_THROWS_AS(mrc_sinr(r, std::vector<double>{1.0}, 0.1, 8), std::invalid_argument);
}

TEST_CASE("achievable_rate")
{
    CHECK(achievable_rate(0.0, 1000, 4) == 0.0);
    CHECK(achievable_rate(1.0, 1000, 4) == doctest::Approx(0.996));
    CHECK(achievable_rate(3.0, 8, 4) == doctest::Approx(1.0));
    CHECK_THROWS_AS(achievable_rate(1.0, 4, 4), std::invalid_argument);
}

TEST_CASE("asymptotic_rate")
{
    const double E = 1e-3, sigma2 = 1e-14, bBI = 3.98e-7, bIU = 7.9e-5;
    const int T = 1000, K = 4;
    const CovarianceSet cov = CovarianceSet::identity(4, 50, {0.0}, bBI, {bIU});
    const ReflectionPattern ones = ReflectionPattern::all_ones(50);
    CHECK(asymptotic_rate(cov, ones, 0, E, sigma2, T, K) ==
          doctest::Approx((T - K) / double(T) * std::log2(1.0 + E * bIU * bBI / sigma2)));
    CHECK(asymptotic_rate(cov, ones, 0, 0.0, sigma2, T, K) == 0.0);

    Rng rng(4);
    const CovarianceSet corr = fixtures::random_model1(4, 20, 1, rng, 0.0, bBI, bIU);
    const ReflectionPattern phi(fixtures::random_phi(20, rng));
    auto snr = [&](const ReflectionPattern &x) {
        return std::exp2(asymptotic_rate(corr, x, 0, E, sigma2, T, K) * T / (T - K)) - 1.0;
    };
    CHECK(snr(phi.scaled(0.5)) == doctest::Approx(0.25 * snr(phi)).epsilon(1e-10));
}

TEST_CASE("Monte Carlo rate decreases with noise power")
{
    std::set<std::string> consumed;
    ScenarioConfig c = scenario_from_json(nlohmann::json{{"K", 3}, {"covariance_model", "identity"}}, consumed);
    std::vector<std::vector<double>> rates;
    for (double s2 : {1e-14, 1e-13, 1e-12}) {
        c.sigma2_w = s2;
        rates.push_back(validate_large_array_rate(c, {{40, 8}}, 50).front().rate_mc);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(rates[1][k] <= rates[0][k]);
        CHECK(rates[2][k] <= rates[1][k]);
    }
}

TEST_CASE("large-array rate gap shrinks with N and is thread-independent")
{
    std::set<std::string> consumed;
    const ScenarioConfig c =
        scenario_from_json(nlohmann::json{{"K", 4}, {"covariance_model", "identity"}, {"seed", 3}}, consumed);
    const auto one = validate_large_array_rate(c, {{25, 5}, {100, 20}}, 100, 1);
    CHECK(one[1].gap <= 0.9 * one[0].gap);
    CHECK(one[0].rate_asym == one[1].rate_asym);

    const auto three = validate_large_array_rate(c, {{25, 5}}, 100, 3);
    CHECK(three[0].rate_mc == one[0].rate_mc);

    CHECK_THROWS_AS(validate_large_array_rate(c, {{25, 5}}, 0), std::invalid_argument);
}
