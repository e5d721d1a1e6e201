// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo checks of the large-array behaviour: bounded spectra, channel hardening,
// favorable propagation, Gaussian limits and the random trace lemmas.

#ifndef IRSMIMO_VALIDATOR_HPP
#define IRSMIMO_VALIDATOR_HPP

#include "irsmimo/channels.hpp"
#include "irsmimo/scenario.hpp"

#include <string>
#include <vector>

namespace irsmimo {

struct SpectralReport
{
    std::string matrix_id;
    int N = 0;
    int M = 0;
    RVector singular_values;
    double min_singular = 0.0;
    double spectral_norm = 0.0;
};

/// One statistic over an increasing ladder of N.
struct ConvergenceSeries
{
    std::string statistic;
    std::vector<int> n_values;
    std::vector<double> values;
    std::vector<std::size_t> trials;

    void append(int n, double value, std::size_t trial_count);
};

/// Smallest singular value of (C^I)^{1/2} diag(φ) (C_k^I)^{1/2}.
double min_singular_Lk(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k);

/// min_singular_Lk for user k at each N (M from the config), pattern from the config.
ConvergenceSeries min_singular_sweep(const ScenarioConfig &config, const std::vector<int> &n_values, std::size_t k);

/// Singular spectra of the two cross matrices built from one draw of R̃ per trial:
///   "C_tilde" = L_kᴴ R̃ᴴ C^B R̃ L_j / N   (N×N)
///   "C_hat"   = (C_k^B)^{1/2} (C^B)^{1/2} R̃ L_j / N   (M×N)
/// where L_k = (C^I)^{1/2} diag(φ) (C_k^I)^{1/2}. R̃ has unit-variance entries, so the spectra
/// are in units of the IRS-BS gain. Each trial draws R̃ = sample_complex_gaussian(M, N, 1, rng)
/// and emits C_tilde then C_hat.
std::vector<SpectralReport> spectral_dist_Ckj(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k,
                                              std::size_t j, std::size_t trials, Rng &rng);

struct PairStatistic
{
    std::size_t k = 0;
    std::size_t j = 0;
    std::vector<double> samples; // |c_kᴴc_j|/(MN) per block
    double median = 0.0;
    double p90 = 0.0;
};

struct UserStatistic
{
    double target = 0.0;         // β_k^IU β^BI φᴴC̄_kφ / N
    std::vector<double> samples; // |c_kᴴc_k/(MN) − target| per block
    double median = 0.0;
    double p90 = 0.0;
};

struct HardeningStats
{
    int N = 0;
    int M = 0;
    std::size_t blocks = 0;
    std::vector<UserStatistic> hardening;
    std::vector<PairStatistic> favorable; // k < j
};

HardeningStats hardening_favorable_stats(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t blocks,
                                         std::uint64_t seed, unsigned threads = 1);

struct MarginalTest
{
    std::string name; // e.g. "v11"
    double theoretical_variance = 0.0;
    double sample_variance = 0.0;
    double ks_statistic = 0.0;
    double critical_value = 0.0;
    bool passed = false;
};

struct GaussianityReport
{
    int N = 0;
    int M = 0;
    std::size_t samples = 0;
    double significance = 0.01;
    std::vector<MarginalTest> marginals;
    // Pairwise correlation of the real parts against the value implied by V.
    double corr_v11_v12 = 0.0;
    double corr_v11_v12_expected = 0.0;
    double corr_v11_v21 = 0.0;
    double corr_v11_v21_expected = 0.0;
    bool small_n = false; // the large-array limit is not expected to hold
    bool passed = false;

    std::vector<double> v11, v12, v21; // the samples, for plotting
};

/// Real parts of c_k(m)/√N for (user, antenna) = (1,1), (1,2), (2,1) over `samples` blocks,
/// each KS-tested against N(0, V_k(m,m)/(2N)) at the given significance (0.01 or 0.05).
/// Needs K ≥ 2 and M ≥ 2; throws std::invalid_argument for fewer than 1000 samples.
GaussianityReport gaussianity_check(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t samples,
                                    std::uint64_t seed, double significance = 0.01, unsigned threads = 1);

/// sup_x |F_n(x) − Φ(x/σ)| of the sample against N(0, σ²).
double ks_statistic(std::vector<double> sample, double sigma);

/// Asymptotic Kolmogorov critical value c(α)/√n for α ∈ {0.01, 0.05}.
double ks_critical_value(std::size_t n, double significance);

struct TraceLemmaRow
{
    int M = 0;
    std::vector<double> quadratic; // |xᴴAx − tr(A)/M|
    std::vector<double> bilinear;  // |xᴴAy|
    double quadratic_median = 0.0;
    double bilinear_median = 0.0;
};

enum class TraceMatrix
{
    Identity,
    Zero,
    RandomBounded, // Hermitian, spectral norm 1
    RandomLowRank  // orthogonal projector onto a random 8-dimensional subspace
};

/// x, y i.i.d. CN(0, 1/M) entries; one row per dimension.
std::vector<TraceLemmaRow> trace_lemma_check(const std::vector<int> &dimensions, TraceMatrix kind, std::size_t trials,
                                             Rng &rng);

} // namespace irsmimo

#endif
