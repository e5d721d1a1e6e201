// SPDX-License-Identifier: Apache-2.0
//
// MRC combining with imperfect CSI, achievable rates and the closed-form asymptotic rate.

#ifndef IRSMIMO_RATE_HPP
#define IRSMIMO_RATE_HPP

#include "irsmimo/estimation.hpp"

#include <span>
#include <utility>
#include <vector>

namespace irsmimo {

/// γ_k = p_k|ĉ_kᴴĉ_k|² / (Σ_{j≠k} p_j|ĉ_kᴴĉ_j|² + Σ_j p_j ĉ_kᴴF_jĉ_k + σ²ĉ_kᴴĉ_k/N).
/// A zero estimate gives γ_k = 0.
std::vector<double> mrc_sinr(const EstimationResult &est, std::span<const double> p, double sigma2, Eigen::Index N);

/// (T−K)/T · log2(1 + γ). Throws std::invalid_argument for T ≤ K.
double achievable_rate(double gamma, int T, int K);

/// (T−K)/T · log2(1 + E_k β_k^IU β^BI φᴴC̄_kφ / (Nσ²)), with N = φ.size().
double asymptotic_rate(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k, double E_k,
                       double sigma2, int T, int K);

struct RateReport
{
    int N = 0;
    int M = 0;
    double q = 0.0;
    std::size_t blocks = 0;
    std::vector<double> rate_mc;
    std::vector<double> rate_asym;
    double sum_mc = 0.0;
    double sum_asym = 0.0;
    double gap = 0.0; // |sum_mc − sum_asym| / sum_asym
};

/// Monte Carlo rate of the full pipeline (sample, train, LMMSE, MRC) with p_k = E_k/(MN),
/// averaged over `blocks` blocks, against the asymptotic rate. One report per (N, M).
std::vector<RateReport> validate_large_array_rate(const ScenarioConfig &config, const std::vector<std::pair<int, int>> &ladder,
                                          std::size_t blocks, unsigned threads = 1);

} // namespace irsmimo

#endif
