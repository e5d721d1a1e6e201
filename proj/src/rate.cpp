// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/rate.hpp"

#include <cmath>

namespace irsmimo {

std::vector<double> mrc_sinr(const EstimationResult &est, std::span<const double> p, double sigma2, Eigen::Index N)
{
    const std::size_t K = est.c_hat.size();
    if (p.size() != K || est.F.size() != K)
        throw std::invalid_argument("mrc_sinr: powers, estimates and error matrices disagree in length");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("mrc_sinr: sigma2 must be positive");
    for (double pk : p)
        if (!(pk >= 0.0))
            throw std::invalid_argument("mrc_sinr: negative power");

    std::vector<double> gamma(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        const CVector &w = est.c_hat[k];
        const double gain = w.squaredNorm();
        if (gain == 0.0)
            continue;
        double interference = 0.0;
        double error = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            if (j != k)
                interference += p[j] * std::norm(w.dot(est.c_hat[j]));
            error += p[j] * w.dot(est.F[j] * w).real();
        }
        const double noise = sigma2 * gain / static_cast<double>(N);
        gamma[k] = p[k] * gain * gain / (interference + error + noise);
    }
    return gamma;
}

double achievable_rate(double gamma, int T, int K)
{
    if (T <= K)
        throw std::invalid_argument("achievable_rate: T must exceed K");
    if (!(gamma >= 0.0))
        throw std::invalid_argument("achievable_rate: negative SINR");
    return static_cast<double>(T - K) / T * std::log2(1.0 + gamma);
}

double asymptotic_rate(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k, double E_k,
                       double sigma2, int T, int K)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("asymptotic_rate: sigma2 must be positive");
    const double form = quadratic_form(cbar_matrix(cov, k), phi.coefficients());
    const double snr = E_k * cov.beta_IU.at(k) * cov.beta_BI * form / (static_cast<double>(phi.size()) * sigma2);
    return achievable_rate(snr, T, K);
}

std::vector<RateReport> validate_large_array_rate(const ScenarioConfig &config, const std::vector<std::pair<int, int>> &ladder,
                                          std::size_t blocks, unsigned threads)
{
    if (ladder.empty())
        throw std::invalid_argument("validate_large_array_rate: empty ladder");
    if (blocks == 0)
        throw std::invalid_argument("validate_large_array_rate: blocks must be positive");

    std::vector<RateReport> reports;
    for (const auto &[N, M] : ladder) {
        const ScenarioConfig sized = with_sizes(config, N, M);
        const CovarianceSet cov = build_covariance(sized);
        const ReflectionPattern phi = scenario_pattern(sized);
        const ChannelSampler sampler(cov, phi);
        const BlockEstimator estimator(cov, phi, sized.p_t_w, sized.sigma2_w);
        const std::size_t K = cov.users();

        std::vector<double> power(K);
        for (std::size_t k = 0; k < K; ++k)
            power[k] = sized.user_power(k);

        const std::uint64_t size_seed =
            derive_seed(sized.seed, 0x72617465 /* "rate" */, (static_cast<std::uint64_t>(N) << 32) | M);
        // rates[b*K + k]
        std::vector<double> rates(blocks * K);
        parallel_for(blocks, threads, [&](std::size_t b) {
            const std::uint64_t block_seed = derive_seed(size_seed, 0, b);
            const auto c = sampler.sample_effective(block_seed);
            Rng noise(derive_seed(block_seed, 0x6e /* "n" */));
            const auto y = train_and_despread(c, N, estimator.pilots(), sized.p_t_w, sized.sigma2_w, noise);
            const auto gamma = mrc_sinr(estimator.estimate(y), power, sized.sigma2_w, N);
            for (std::size_t k = 0; k < K; ++k)
                rates[b * K + k] = achievable_rate(gamma[k], sized.T, sized.K);
        });

        RateReport r;
        r.N = N;
        r.M = M;
        r.q = static_cast<double>(N) / M;
        r.blocks = blocks;
        std::vector<double> column(blocks);
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t b = 0; b < blocks; ++b)
                column[b] = rates[b * K + k];
            r.rate_mc.push_back(compensated_sum(column) / static_cast<double>(blocks));
            r.rate_asym.push_back(asymptotic_rate(cov, phi, k, sized.E_w[k], sized.sigma2_w, sized.T, sized.K));
        }
        r.sum_mc = compensated_sum(r.rate_mc);
        r.sum_asym = compensated_sum(r.rate_asym);
        r.gap = std::abs(r.sum_mc - r.sum_asym) / r.sum_asym;
        reports.push_back(std::move(r));
    }
    return reports;
}

} // namespace irsmimo
