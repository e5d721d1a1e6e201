// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/validator.hpp"

#include <algorithm>
#include <cmath>

namespace irsmimo {

void ConvergenceSeries::append(int n, double value, std::size_t trial_count)
{
    if (!n_values.empty() && n <= n_values.back())
        throw std::invalid_argument("ConvergenceSeries: N values must increase");
    if (trial_count < 1)
        throw std::invalid_argument("ConvergenceSeries: at least one trial per point");
    n_values.push_back(n);
    values.push_back(value);
    trials.push_back(trial_count);
}

namespace {

CMatrix l_matrix(const CMatrix &sqrt_CI, const CVector &phi, const CMatrix &sqrt_CIk)
{
    return sqrt_CI * phi.asDiagonal() * sqrt_CIk;
}

SpectralReport make_report(std::string id, const CMatrix &A, int N, int M)
{
    SpectralReport r;
    r.matrix_id = std::move(id);
    r.N = N;
    r.M = M;
    r.singular_values = singular_values(A);
    r.spectral_norm = r.singular_values.size() ? r.singular_values(0) : 0.0;
    r.min_singular = r.singular_values.size() ? r.singular_values.minCoeff() : 0.0;
    return r;
}

void summarize(std::vector<double> &samples, double &med, double &p90)
{
    med = median(samples);
    p90 = quantile(samples, 0.9);
}

} // namespace

double min_singular_Lk(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k)
{
    if (phi.size() != cov.irs_elements())
        throw std::invalid_argument("min_singular_Lk: pattern length differs from IRS size");
    const CMatrix L = l_matrix(hermitian_sqrt(cov.C_I), phi.coefficients(), hermitian_sqrt(cov.C_I_k.at(k)));
    return singular_values(L).minCoeff();
}

ConvergenceSeries min_singular_sweep(const ScenarioConfig &config, const std::vector<int> &n_values, std::size_t k)
{
    if (n_values.empty())
        throw std::invalid_argument("min_singular_sweep: empty N ladder");
    ConvergenceSeries series;
    series.statistic = "min_singular_L";
    for (int N : n_values) {
        const ScenarioConfig sized = with_sizes(config, N, config.M);
        series.append(N, min_singular_Lk(build_covariance(sized), scenario_pattern(sized), k), 1);
    }
    return series;
}

std::vector<SpectralReport> spectral_dist_Ckj(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k,
                                              std::size_t j, std::size_t trials, Rng &rng)
{
    if (trials < 1)
        throw std::invalid_argument("spectral_dist_Ckj: trials must be positive");
    const auto M = cov.bs_antennas();
    const auto N = cov.irs_elements();
    if (phi.size() != N)
        throw std::invalid_argument("spectral_dist_Ckj: pattern length differs from IRS size");

    const CMatrix sqrt_CI = hermitian_sqrt(cov.C_I);
    const CMatrix sqrt_CB = hermitian_sqrt(cov.C_B);
    const CMatrix Lk = l_matrix(sqrt_CI, phi.coefficients(), hermitian_sqrt(cov.C_I_k.at(k)));
    const CMatrix Lj = l_matrix(sqrt_CI, phi.coefficients(), hermitian_sqrt(cov.C_I_k.at(j)));
    const CMatrix left = hermitian_sqrt(cov.C_B_k.at(k)) * sqrt_CB;
    const double n = static_cast<double>(N);

    std::vector<SpectralReport> out;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const CMatrix Rt = sample_complex_gaussian(M, N, 1.0, rng);
        const CMatrix RLj = Rt * Lj;
        const CMatrix tilde = (Rt * Lk).adjoint() * cov.C_B * RLj / n;
        out.push_back(make_report("C_tilde", tilde, static_cast<int>(N), static_cast<int>(M)));
        out.push_back(make_report("C_hat", left * RLj / n, static_cast<int>(N), static_cast<int>(M)));
    }
    return out;
}

HardeningStats hardening_favorable_stats(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t blocks,
                                         std::uint64_t seed, unsigned threads)
{
    if (blocks < 1)
        throw std::invalid_argument("hardening_favorable_stats: blocks must be positive");
    const ChannelSampler sampler(cov, phi);
    const std::size_t K = cov.users();
    const double M = static_cast<double>(cov.bs_antennas());
    const double N = static_cast<double>(cov.irs_elements());

    HardeningStats stats;
    stats.N = static_cast<int>(N);
    stats.M = static_cast<int>(M);
    stats.blocks = blocks;
    stats.hardening.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        stats.hardening[k].target =
            cov.beta_IU[k] * cov.beta_BI * quadratic_form(cbar_matrix(cov, k), phi.coefficients()) / N;
        stats.hardening[k].samples.resize(blocks);
    }
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = k + 1; j < K; ++j)
            stats.favorable.push_back({k, j, std::vector<double>(blocks), 0.0, 0.0});

    parallel_for(blocks, threads, [&](std::size_t b) {
        const auto c = sampler.sample_effective(derive_seed(seed, 0x68617264 /* "hard" */, b));
        for (std::size_t k = 0; k < K; ++k)
            stats.hardening[k].samples[b] = std::abs(c[k].squaredNorm() / (M * N) - stats.hardening[k].target);
        for (auto &pair : stats.favorable)
            pair.samples[b] = std::abs(c[pair.k].dot(c[pair.j])) / (M * N);
    });

    for (auto &u : stats.hardening)
        summarize(u.samples, u.median, u.p90);
    for (auto &p : stats.favorable)
        summarize(p.samples, p.median, p.p90);
    return stats;
}

double ks_statistic(std::vector<double> sample, double sigma)
{
    if (sample.empty())
        throw std::invalid_argument("ks_statistic: empty sample");
    if (!(sigma > 0.0))
        throw std::invalid_argument("ks_statistic: sigma must be positive");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-sample[i] / (sigma * std::sqrt(2.0)));
        d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
    }
    return d;
}

double ks_critical_value(std::size_t n, double significance)
{
    double c = 0.0;
    if (std::abs(significance - 0.01) < 1e-12)
        c = 1.6276;
    else if (std::abs(significance - 0.05) < 1e-12)
        c = 1.3581;
    else
        throw std::invalid_argument("ks_critical_value: significance must be 0.01 or 0.05");
    return c / std::sqrt(static_cast<double>(n));
}

GaussianityReport gaussianity_check(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t samples,
                                    std::uint64_t seed, double significance, unsigned threads)
{
    if (samples < 1000)
        throw std::invalid_argument("gaussianity_check: at least 1000 samples required");
    if (cov.users() < 2 || cov.bs_antennas() < 2)
        throw std::invalid_argument("gaussianity_check: needs two users and two antennas");

    const ChannelSampler sampler(cov, phi);
    const double N = static_cast<double>(cov.irs_elements());
    const double scale = 1.0 / std::sqrt(N);

    GaussianityReport r;
    r.N = static_cast<int>(cov.irs_elements());
    r.M = static_cast<int>(cov.bs_antennas());
    r.samples = samples;
    r.significance = significance;
    r.small_n = r.N < 16;
    r.v11.resize(samples);
    r.v12.resize(samples);
    r.v21.resize(samples);

    parallel_for(samples, threads, [&](std::size_t s) {
        const auto c = sampler.sample_effective(derive_seed(seed, 0x6761 /* "ga" */, s));
        r.v11[s] = (c[0](0) * scale).real();
        r.v12[s] = (c[0](1) * scale).real();
        r.v21[s] = (c[1](0) * scale).real();
    });

    const CMatrix V1 = effective_cov_V(cov, 0, phi);
    const CMatrix V2 = effective_cov_V(cov, 1, phi);
    const double critical = ks_critical_value(samples, significance);

    auto test = [&](const char *name, const std::vector<double> &x, double variance) {
        MarginalTest t;
        t.name = name;
        t.theoretical_variance = variance;
        double acc = 0.0;
        for (double v : x)
            acc += v * v;
        t.sample_variance = acc / static_cast<double>(x.size());
        t.critical_value = critical;
        t.ks_statistic = variance > 0.0 ? ks_statistic(x, std::sqrt(variance)) : 1.0;
        t.passed = t.ks_statistic < critical;
        return t;
    };
    r.marginals.push_back(test("v11", r.v11, V1(0, 0).real() / (2.0 * N)));
    r.marginals.push_back(test("v12", r.v12, V1(1, 1).real() / (2.0 * N)));
    r.marginals.push_back(test("v21", r.v21, V2(0, 0).real() / (2.0 * N)));

    auto correlation = [](const std::vector<double> &a, const std::vector<double> &b) {
        double ab = 0.0, aa = 0.0, bb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            ab += a[i] * b[i];
            aa += a[i] * a[i];
            bb += b[i] * b[i];
        }
        return ab / std::sqrt(aa * bb);
    };
    r.corr_v11_v12 = correlation(r.v11, r.v12);
    r.corr_v11_v12_expected = V1(0, 1).real() / std::sqrt(V1(0, 0).real() * V1(1, 1).real());
    r.corr_v11_v21 = correlation(r.v11, r.v21);
    r.corr_v11_v21_expected = 0.0;

    // Five standard errors of a sample correlation.
    const double corr_tol = 5.0 / std::sqrt(static_cast<double>(samples));
    r.passed = std::all_of(r.marginals.begin(), r.marginals.end(), [](const auto &m) { return m.passed; }) &&
               std::abs(r.corr_v11_v12 - r.corr_v11_v12_expected) < corr_tol &&
               std::abs(r.corr_v11_v21 - r.corr_v11_v21_expected) < corr_tol;
    return r;
}

std::vector<TraceLemmaRow> trace_lemma_check(const std::vector<int> &dimensions, TraceMatrix kind, std::size_t trials,
                                             Rng &rng)
{
    if (trials < 1)
        throw std::invalid_argument("trace_lemma_check: trials must be positive");
    std::vector<TraceLemmaRow> rows;
    for (int M : dimensions) {
        if (M < 1)
            throw std::invalid_argument("trace_lemma_check: dimension must be positive");
        CMatrix A;
        switch (kind) {
        case TraceMatrix::Identity:
            A = CMatrix::Identity(M, M);
            break;
        case TraceMatrix::Zero:
            A = CMatrix::Zero(M, M);
            break;
        case TraceMatrix::RandomBounded: {
            const CMatrix X = sample_complex_gaussian(M, M, 1.0, rng);
            A = X + X.adjoint();
            A /= spectral_norm(A);
            break;
        }
        case TraceMatrix::RandomLowRank: {
            const Eigen::Index rank = std::min<Eigen::Index>(8, M);
            const CMatrix Q = Eigen::HouseholderQR<CMatrix>(sample_complex_gaussian(M, rank, 1.0, rng))
                                  .householderQ() *
                              CMatrix::Identity(M, rank);
            A = Q * Q.adjoint();
            break;
        }
        }
        const cdouble trace_over_m = A.trace() / static_cast<double>(M);
        TraceLemmaRow row;
        row.M = M;
        for (std::size_t t = 0; t < trials; ++t) {
            const CVector x = sample_complex_gaussian(M, 1.0 / M, rng);
            const CVector y = sample_complex_gaussian(M, 1.0 / M, rng);
            row.quadratic.push_back(std::abs(x.dot(A * x) - trace_over_m));
            row.bilinear.push_back(std::abs(x.dot(A * y)));
        }
        row.quadratic_median = median(row.quadratic);
        row.bilinear_median = median(row.bilinear);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace irsmimo
