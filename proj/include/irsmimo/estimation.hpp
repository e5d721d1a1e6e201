// SPDX-License-Identifier: Apache-2.0
//
// Pilot training, despreading and LMMSE estimation of the normalized effective channels.

#ifndef IRSMIMO_ESTIMATION_HPP
#define IRSMIMO_ESTIMATION_HPP

#include "irsmimo/channels.hpp"
#include "irsmimo/scenario.hpp"

#include <utility>
#include <vector>

namespace irsmimo {

/// K×K unit-modulus pilots, column k is a_k. Pilot length τ = K.
struct PilotBook
{
    CMatrix A;

    std::size_t users() const { return static_cast<std::size_t>(A.cols()); }
};

/// DFT book a_{k,i} = exp(-j2π(k-1)(i-1)/K). Distinct columns satisfy a_kᴴa_j = 0.
PilotBook make_pilots(int K);

/// Despread observations ŷ_k = Y a_k* / √N for Y = √p_t C Aᵀ + Z, Z i.i.d. CN(0, σ²).
/// Each ŷ_k = K√p_t c_k/√N + ẑ_k with ẑ_k ~ CN(0, Kσ²I/N). No noise is drawn for σ² = 0.
std::vector<CVector> train_and_despread(const std::vector<CVector> &c, Eigen::Index N, const PilotBook &pilots,
                                        double p_t, double sigma2, Rng &rng);
std::vector<CVector> train_and_despread(const ChannelRealization &real, const PilotBook &pilots, double p_t,
                                        double sigma2, Rng &rng);

/// LMMSE filter of one user, built from the eigen-decomposition of V_k = U Λ Uᴴ.
///
/// ĉ_k = W ŷ_k with W = U diag(λ/(λ + σ²/(Kp_t))) Uᴴ / (K√p_t), and the error covariance
/// F_k = U diag(λσ²/(σ² + p_tKλ)) Uᴴ / N of the estimate of c_k/√N.
struct LmmseFilter
{
    CMatrix W;
    CMatrix F;
    double mse_trace = 0.0;
};

LmmseFilter lmmse_filter(const CMatrix &V, int K, Eigen::Index N, double p_t, double sigma2);

struct EstimationResult
{
    std::vector<CVector> c_hat; // estimates of c_k/√N
    std::vector<CMatrix> F;
    std::vector<double> mse_trace;
};

std::pair<CVector, CMatrix> lmmse_estimate(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k,
                                           const CVector &y_hat_k, double p_t, double sigma2);

/// All users' filters for a fixed (cov, φ); estimate() is then one matrix-vector product per user.
class BlockEstimator
{
  public:
    BlockEstimator(const CovarianceSet &cov, const ReflectionPattern &phi, double p_t, double sigma2);

    EstimationResult estimate(const std::vector<CVector> &y_hat) const;

    const PilotBook &pilots() const { return pilots_; }
    const LmmseFilter &filter(std::size_t k) const { return filters_.at(k); }
    double pilot_power() const { return p_t_; }
    double noise_power() const { return sigma2_; }

  private:
    PilotBook pilots_;
    std::vector<LmmseFilter> filters_;
    double p_t_;
    double sigma2_;
};

/// M σ² / (N p_t K), the bound on tr(F_k).
double mse_trace_bound(Eigen::Index M, Eigen::Index N, int K, double p_t, double sigma2);

struct MsePoint
{
    int N = 0;
    int M = 0;
    std::size_t user = 0;
    double tr_F_over_M = 0.0;
    double bound_over_M = 0.0;
};

/// tr(F_k)/M over a ladder of (N, M) sizes, using the config's pattern at each size.
/// Throws NumericalError if the bound is violated anywhere.
std::vector<MsePoint> mse_trend(const ScenarioConfig &config, const std::vector<std::pair<int, int>> &ladder);

} // namespace irsmimo

#endif
