// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/estimation.hpp"

#include <cmath>
#include <numbers>

namespace irsmimo {

PilotBook make_pilots(int K)
{
    if (K < 1)
        throw std::invalid_argument("make_pilots: K must be at least 1");
    PilotBook book;
    book.A.resize(K, K);
    for (int i = 0; i < K; ++i)
        for (int k = 0; k < K; ++k) {
            // Reduce the exponent first so that entries are exact for small K.
            const int e = (i * k) % K;
            book.A(i, k) = std::polar(1.0, -2.0 * std::numbers::pi * e / K);
        }
    return book;
}

std::vector<CVector> train_and_despread(const std::vector<CVector> &c, Eigen::Index N, const PilotBook &pilots,
                                        double p_t, double sigma2, Rng &rng)
{
    const auto K = static_cast<Eigen::Index>(pilots.users());
    if (static_cast<Eigen::Index>(c.size()) != K || K == 0)
        throw std::invalid_argument("train_and_despread: one channel per pilot expected");
    if (!(p_t >= 0.0) || !(sigma2 >= 0.0))
        throw std::invalid_argument("train_and_despread: powers must be non-negative");
    const Eigen::Index M = c.front().size();

    CMatrix C(M, K);
    for (Eigen::Index k = 0; k < K; ++k)
        C.col(k) = c[k];
    CMatrix Y = std::sqrt(p_t) * C * pilots.A.transpose();
    if (sigma2 > 0.0)
        Y += sample_complex_gaussian(M, K, sigma2, rng);

    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    const CMatrix despread = Y * pilots.A.conjugate() * scale;
    std::vector<CVector> y(K);
    for (Eigen::Index k = 0; k < K; ++k)
        y[k] = despread.col(k);
    return y;
}

std::vector<CVector> train_and_despread(const ChannelRealization &real, const PilotBook &pilots, double p_t,
                                        double sigma2, Rng &rng)
{
    return train_and_despread(real.c, real.R.cols(), pilots, p_t, sigma2, rng);
}

LmmseFilter lmmse_filter(const CMatrix &V, int K, Eigen::Index N, double p_t, double sigma2)
{
    if (!(p_t > 0.0) || !(sigma2 >= 0.0))
        throw std::invalid_argument("lmmse_filter: need p_t > 0 and sigma2 >= 0");
    const HermitianEig eig = hermitian_eig(V);
    const double reg = sigma2 / (K * p_t);
    const Eigen::Index M = V.rows();

    RVector gain(M);
    RVector error(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        const double l = std::max(eig.eigenvalues(i), 0.0);
        if (l + reg <= 0.0) {
            // σ² = 0 and a null direction: nothing is observed there and nothing is unknown.
            gain(i) = 0.0;
            error(i) = 0.0;
            continue;
        }
        gain(i) = l / (l + reg);
        error(i) = l * sigma2 / (sigma2 + p_t * K * l) / static_cast<double>(N);
    }
    if (!gain.allFinite() || !error.allFinite())
        throw NumericalError("lmmse_filter: non-finite filter");

    const CMatrix &U = eig.eigenvectors;
    LmmseFilter f;
    f.W = U * gain.cast<cdouble>().asDiagonal() * U.adjoint() / (K * std::sqrt(p_t));
    f.F = U * error.cast<cdouble>().asDiagonal() * U.adjoint();
    f.F = 0.5 * (f.F + f.F.adjoint()).eval();
    f.mse_trace = error.sum();
    return f;
}

std::pair<CVector, CMatrix> lmmse_estimate(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k,
                                           const CVector &y_hat_k, double p_t, double sigma2)
{
    const CMatrix V = effective_cov_V(cov, k, phi);
    const LmmseFilter f = lmmse_filter(V, static_cast<int>(cov.users()), cov.irs_elements(), p_t, sigma2);
    if (y_hat_k.size() != V.rows())
        throw std::invalid_argument("lmmse_estimate: observation length differs from M");
    return {f.W * y_hat_k, f.F};
}

BlockEstimator::BlockEstimator(const CovarianceSet &cov, const ReflectionPattern &phi, double p_t, double sigma2)
    : pilots_(make_pilots(static_cast<int>(cov.users()))), p_t_(p_t), sigma2_(sigma2)
{
    for (std::size_t k = 0; k < cov.users(); ++k)
        filters_.push_back(lmmse_filter(effective_cov_V(cov, k, phi), static_cast<int>(cov.users()),
                                        cov.irs_elements(), p_t, sigma2));
}

EstimationResult BlockEstimator::estimate(const std::vector<CVector> &y_hat) const
{
    if (y_hat.size() != filters_.size())
        throw std::invalid_argument("BlockEstimator: one observation per user expected");
    EstimationResult out;
    for (std::size_t k = 0; k < filters_.size(); ++k) {
        out.c_hat.push_back(filters_[k].W * y_hat[k]);
        out.F.push_back(filters_[k].F);
        out.mse_trace.push_back(filters_[k].mse_trace);
    }
    return out;
}

double mse_trace_bound(Eigen::Index M, Eigen::Index N, int K, double p_t, double sigma2)
{
    return static_cast<double>(M) * sigma2 / (static_cast<double>(N) * p_t * K);
}

std::vector<MsePoint> mse_trend(const ScenarioConfig &config, const std::vector<std::pair<int, int>> &ladder)
{
    if (ladder.empty())
        throw std::invalid_argument("mse_trend: empty ladder");
    std::vector<MsePoint> points;
    for (const auto &[N, M] : ladder) {
        const ScenarioConfig sized = with_sizes(config, N, M);
        const CovarianceSet cov = build_covariance(sized);
        const ReflectionPattern phi = scenario_pattern(sized);
        const double bound = mse_trace_bound(M, N, sized.K, sized.p_t_w, sized.sigma2_w);
        for (std::size_t k = 0; k < cov.users(); ++k) {
            const LmmseFilter f =
                lmmse_filter(effective_cov_V(cov, k, phi), sized.K, N, sized.p_t_w, sized.sigma2_w);
            if (f.mse_trace > bound * (1.0 + 1e-9))
                throw NumericalError("mse_trend: tr(F) exceeds its bound at N = " + std::to_string(N));
            points.push_back({N, M, k, f.mse_trace / M, bound / M});
        }
    }
    return points;
}

} // namespace irsmimo
