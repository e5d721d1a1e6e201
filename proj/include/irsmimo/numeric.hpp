// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra and random sampling shared by the whole library.

#ifndef IRSMIMO_NUMERIC_HPP
#define IRSMIMO_NUMERIC_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace irsmimo {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Raised when a decomposition or iterative routine cannot produce a valid result.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Eigen-decomposition A = U diag(values) Uᴴ of a Hermitian matrix, eigenvalues descending.
struct HermitianEig
{
    RVector eigenvalues;
    CMatrix eigenvectors;
};

/// A = left * diag(singulars) * rightᴴ, singular values descending.
struct Svd
{
    CMatrix left;
    RVector singulars;
    CMatrix right;
};

HermitianEig hermitian_eig(const CMatrix &A);
Svd svd(const CMatrix &A);

// Singular values only (descending), min(rows, cols) of them.
RVector singular_values(const CMatrix &A);

/// Largest absolute deviation from Hermitian symmetry, max |A - Aᴴ|.
double hermitian_defect(const CMatrix &A);

/// Principal square root of a Hermitian positive semi-definite matrix.
///
/// Eigenvalues down to -1e-12 are clamped to zero. Throws std::invalid_argument if the
/// symmetry defect exceeds 1e-8 or an eigenvalue is below -1e-6 * ‖A‖₂.
CMatrix hermitian_sqrt(const CMatrix &A);

double spectral_norm(const CMatrix &A);

CMatrix hadamard(const CMatrix &A, const CMatrix &B);

// --------------------------------------------------------------------------
// Random sampling

using Rng = std::mt19937_64;

/// Deterministic child seed, so independent objects get independent streams.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag, std::uint64_t index = 0);

/// i.i.d. CN(0, variance) entries: real and imaginary parts each N(0, variance/2).
CMatrix sample_complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng &rng);
CVector sample_complex_gaussian(Eigen::Index size, double variance, Rng &rng);

// --------------------------------------------------------------------------
// Reductions and parallel loops

/// Neumaier-compensated sum, so the result does not depend on thread scheduling.
double compensated_sum(std::span<const double> values);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write results into per-index slots.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body);

/// Median of a copy of the values (mean of the middle pair for even sizes).
double median(std::span<const double> values);
double quantile(std::span<const double> values, double level);

} // namespace irsmimo

#endif
