// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/covariance.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace irsmimo {

namespace {

void check_correlation(const CMatrix &C, Eigen::Index n, const char *name)
{
    const std::string label(name);
    if (C.rows() != n || C.cols() != n)
        throw std::invalid_argument(label + ": wrong dimension");
    if (hermitian_defect(C) > 1e-9)
        throw std::invalid_argument(label + ": not Hermitian");
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(C(i, i) - 1.0) > 1e-9)
            throw std::invalid_argument(label + ": diagonal entries must be 1");
    // Cholesky of C + 1e-9 I succeeds iff the smallest eigenvalue exceeds -1e-9.
    const CMatrix shifted = C + 1e-9 * CMatrix::Identity(n, n);
    if (Eigen::LLT<CMatrix>(shifted).info() != Eigen::Success)
        throw std::invalid_argument(label + ": not positive semi-definite");
}

} // namespace

void CovarianceSet::validate() const
{
    const Eigen::Index M = bs_antennas();
    const Eigen::Index N = irs_elements();
    const std::size_t K = users();
    if (M < 1 || N < 1 || K < 1)
        throw std::invalid_argument("CovarianceSet: empty dimensions");
    if (C_I_k.size() != K || beta_BU.size() != K || beta_IU.size() != K)
        throw std::invalid_argument("CovarianceSet: per-user vectors disagree in length");

    check_correlation(C_B, M, "C_B");
    check_correlation(C_I, N, "C_I");
    for (std::size_t k = 0; k < K; ++k) {
        check_correlation(C_B_k[k], M, "C_B_k");
        check_correlation(C_I_k[k], N, "C_I_k");
        if (!(beta_BU[k] >= 0.0) || !(beta_IU[k] >= 0.0))
            throw std::invalid_argument("CovarianceSet: negative path loss");
    }
    if (!(beta_BI >= 0.0))
        throw std::invalid_argument("CovarianceSet: negative path loss");
}

CovarianceSet CovarianceSet::identity(Eigen::Index M, Eigen::Index N, std::vector<double> beta_BU,
                                      double beta_BI, std::vector<double> beta_IU)
{
    const std::size_t K = beta_IU.size();
    CovarianceSet cov;
    cov.C_B = CMatrix::Identity(M, M);
    cov.C_I = CMatrix::Identity(N, N);
    cov.C_B_k.assign(K, CMatrix::Identity(M, M));
    cov.C_I_k.assign(K, CMatrix::Identity(N, N));
    cov.beta_BU = std::move(beta_BU);
    cov.beta_BI = beta_BI;
    cov.beta_IU = std::move(beta_IU);
    cov.validate();
    return cov;
}

// --------------------------------------------------------------------------

CMatrix build_exponential_cov(Eigen::Index n, cdouble c)
{
    if (n < 1)
        throw std::invalid_argument("build_exponential_cov: dimension must be positive");
    if (!(std::abs(c) < 1.0))
        throw std::invalid_argument("build_exponential_cov: |c| must be below 1");

    CMatrix C(n, n);
    // Powers by repeated multiplication along each sub-diagonal.
    cdouble power(1.0, 0.0);
    for (Eigen::Index d = 0; d < n; ++d) {
        for (Eigen::Index i = d; i < n; ++i) {
            C(i, i - d) = power;
            C(i - d, i) = std::conj(power);
        }
        power *= c;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        C(i, i) = 1.0;
    return C;
}

GridShape near_square_grid(Eigen::Index n)
{
    if (n < 1)
        throw std::invalid_argument("near_square_grid: dimension must be positive");
    Eigen::Index rows = 1;
    for (Eigen::Index r = 1; r * r <= n; ++r)
        if (n % r == 0)
            rows = r;
    return {rows, n / rows};
}

CMatrix build_sinc_cov(Eigen::Index n, GridShape grid, double spacing, double wavelength)
{
    if (grid.rows < 1 || grid.cols < 1 || grid.rows * grid.cols != n)
        throw std::invalid_argument("build_sinc_cov: n does not factor as grid rows x cols");
    if (!(spacing > 0.0) || !(wavelength > 0.0))
        throw std::invalid_argument("build_sinc_cov: spacing and wavelength must be positive");

    auto sinc = [](double x) {
        if (x == 0.0)
            return 1.0;
        const double px = std::numbers::pi * x;
        return std::sin(px) / px;
    };

    CMatrix C(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const double ya = static_cast<double>(a / grid.cols) * spacing;
        const double xa = static_cast<double>(a % grid.cols) * spacing;
        for (Eigen::Index b = 0; b <= a; ++b) {
            const double yb = static_cast<double>(b / grid.cols) * spacing;
            const double xb = static_cast<double>(b % grid.cols) * spacing;
            const double dist = std::hypot(xa - xb, ya - yb);
            const double v = sinc(2.0 * dist / wavelength);
            C(a, b) = v;
            C(b, a) = v;
        }
    }
    return C;
}

double path_loss(double d, double d0, double beta0, double alpha)
{
    if (!(d > 0.0) || !(d0 > 0.0))
        throw std::invalid_argument("path_loss: distances must be positive");
    return beta0 * std::pow(d / d0, -alpha);
}

// --------------------------------------------------------------------------

CMatrix cbar_matrix(const CovarianceSet &cov, std::size_t k)
{
    return hadamard(cov.C_I, cov.C_I_k.at(k).transpose());
}

CMatrix dk_matrix(const CovarianceSet &cov, std::size_t k, const ReflectionPattern &phi)
{
    const Eigen::Index N = cov.irs_elements();
    if (phi.size() != N)
        throw std::invalid_argument("dk_matrix: pattern length differs from IRS size");

    const CMatrix sqrt_CI = hermitian_sqrt(cov.C_I);
    const CVector &p = phi.coefficients();
    // diag(φ) C diag(φ)ᴴ has entries φ_m C_mn conj(φ_n).
    const CMatrix inner = p.asDiagonal() * cov.C_I_k.at(k) * p.conjugate().asDiagonal();
    CMatrix D = sqrt_CI * inner * sqrt_CI;
    return 0.5 * (D + D.adjoint());
}

double quadratic_form(const CMatrix &A, const CVector &phi)
{
    return phi.dot(A * phi).real();
}

CMatrix effective_cov_V(const CovarianceSet &cov, std::size_t k, const ReflectionPattern &phi)
{
    if (phi.size() != cov.irs_elements())
        throw std::invalid_argument("effective_cov_V: pattern length differs from IRS size");
    const double reflected = quadratic_form(cbar_matrix(cov, k), phi.coefficients());
    return cov.beta_BU.at(k) * cov.C_B_k.at(k) + cov.beta_BI * cov.beta_IU.at(k) * reflected * cov.C_B;
}

} // namespace irsmimo
