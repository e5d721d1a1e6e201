// SPDX-License-Identifier: Apache-2.0
//
// IRS pattern design for minimum sum power under per-user asymptotic rate targets.
// Successive convex approximation: the quadratic φᴴC̄_kφ is replaced by its tangent at the
// current point and the convex subproblem is solved by projected gradient.

#ifndef IRSMIMO_OPTIMIZER_HPP
#define IRSMIMO_OPTIMIZER_HPP

#include "irsmimo/covariance.hpp"

#include <string>
#include <vector>

namespace irsmimo {

/// [[Re C, −Im C], [Im C, Re C]]: bᵀ A b = φᴴ C φ for b = embed_phi(φ).
RMatrix real_embed(const CMatrix &C);
RMatrix real_embed(const CovarianceSet &cov, std::size_t k);

/// b = [Re φ; Im φ].
RVector embed_phi(const ReflectionPattern &phi);
RVector embed_vector(const CVector &v);
ReflectionPattern unembed(const RVector &b);

/// (2^{R T/(T−K)} − 1) σ² / (M β_k^IU β^BI); the power times φᴴC̄_kφ that meets the target.
double rate_constant(const CovarianceSet &cov, std::size_t k, double target_bps, int T, double sigma2);

/// Power that makes user k's asymptotic rate equal to the target. Throws std::domain_error when
/// φᴴC̄_kφ = 0 and the target is positive.
double feasible_power(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k, double target_bps, int T,
                      double sigma2);

/// b̄ᵀAb̄ + 2b̄ᵀA(b − b̄).
double taylor_lower_bound(const RMatrix &A, const RVector &b, const RVector &b_bar);

struct P2Options
{
    double tol = 1e-8;
    int max_iter = 20000;
};

struct P2Result
{
    RVector b;
    std::vector<double> p;
    double sum_power = 0.0;
    int iterations = 0;
    double projected_gradient_norm = 0.0; // of the objective normalized by its starting value
};

/// Linearized subproblem: minimize Σ_k c_k / ℓ_k(b), ℓ_k(b) = 2 g_kᵀb − s_k, over the per-element
/// unit disks b_n² + b_{n+N}² ≤ 1, starting from `start`. Columns of G are g_k. Steps that would
/// push some ℓ_k below 1e-12 s_k are rejected. Throws NumericalError after max_iter iterations.
P2Result solve_p2_linearized(const RMatrix &G, const RVector &s, const RVector &c, const RVector &start,
                             const P2Options &options = {});

/// Same subproblem from the embedded matrices A_k and tangent point b̄ (g_k = A_k b̄, s_k = b̄ᵀA_kb̄).
P2Result solve_p2(const std::vector<RMatrix> &A, const RVector &b_bar, const RVector &c,
                  const P2Options &options = {});

struct ScaIteration
{
    int iteration = 0;
    double objective_w = 0.0;   // Σ p_k returned by the subproblem (iteration 0: feasible power at the start)
    double true_power_w = 0.0;  // Σ feasible_power at the new pattern
    double step_norm_sq = 0.0;  // ‖b^(i) − b^(i−1)‖²
    double disk_residual = 0.0; // max(0, max_n b_n² + b_{n+N}² − 1)
};

struct ScaTrace
{
    std::vector<ScaIteration> iterations;
    bool converged = false;
};

struct PowerSolution
{
    ReflectionPattern phi;
    std::vector<double> p;
    double sum_power = 0.0;
    std::vector<double> rates; // asymptotic rates with E_k = p_k M N
};

enum class ScaInit
{
    AllOne,     // φ_n = 1
    RandomPhase // |φ_n| = 1, θ_n uniform
};

struct ScaOptions
{
    ScaInit init = ScaInit::AllOne;
    double delta = 1e-6;
    int max_iter = 100;
    P2Options inner;
};

struct ScaResult
{
    PowerSolution solution;
    ScaTrace trace;
};

/// Unit-amplitude start; rng supplies the phases for ScaInit::RandomPhase.
ScaResult sca_optimize(const CovarianceSet &cov, const std::vector<double> &targets_bps, int T, double sigma2,
                       Rng &rng, const ScaOptions &options = {});

ReflectionPattern benchmark_patterns(Eigen::Index N, const std::string &kind, Rng &rng);

struct ComparisonRow
{
    std::string scheme;
    double target_bps = 0.0; // mean per-user target
    double sum_power_w = 0.0;
};

/// Sum power per scheme: "sca" runs sca_optimize, the others use benchmark_patterns with
/// feasible_power per user.
std::vector<ComparisonRow> compare_sum_power(const CovarianceSet &cov, const std::vector<double> &targets_bps, int T,
                                             double sigma2, const std::vector<std::string> &schemes, Rng &rng,
                                             const ScaOptions &options = {});

} // namespace irsmimo

#endif
