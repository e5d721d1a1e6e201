// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace irsmimo {

HermitianEig hermitian_eig(const CMatrix &A)
{
    if (A.rows() != A.cols() || A.rows() == 0)
        throw std::invalid_argument("hermitian_eig: matrix must be square and non-empty");

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(A);
    if (solver.info() != Eigen::Success)
        throw NumericalError("hermitian_eig: eigen-solver did not converge");

    // Eigen returns ascending order.
    HermitianEig out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

Svd svd(const CMatrix &A)
{
    if (A.size() == 0)
        throw std::invalid_argument("svd: empty matrix");

    Eigen::BDCSVD<CMatrix> solver(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (solver.info() != Eigen::Success)
        throw NumericalError("svd: decomposition failed");
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

RVector singular_values(const CMatrix &A)
{
    if (A.size() == 0)
        throw std::invalid_argument("singular_values: empty matrix");

    Eigen::BDCSVD<CMatrix> solver(A);
    if (solver.info() != Eigen::Success)
        throw NumericalError("singular_values: SVD did not converge");
    RVector s = solver.singularValues();
    return s;
}

double hermitian_defect(const CMatrix &A)
{
    if (A.rows() != A.cols())
        return std::numeric_limits<double>::infinity();
    return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix hermitian_sqrt(const CMatrix &A)
{
    if (A.rows() != A.cols() || A.rows() == 0)
        throw std::invalid_argument("hermitian_sqrt: matrix must be square and non-empty");
    if (hermitian_defect(A) > 1e-8)
        throw std::invalid_argument("hermitian_sqrt: matrix is not Hermitian");

    const CMatrix sym = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericalError("hermitian_sqrt: eigen-solver did not converge");

    RVector lambda = solver.eigenvalues();
    const double norm2 = lambda.cwiseAbs().maxCoeff();
    if (lambda.minCoeff() < -1e-6 * norm2)
        throw std::invalid_argument("hermitian_sqrt: matrix has a negative eigenvalue");

    // Eigenvalues in [-1e-6 ‖A‖₂, 0) are rounding noise of a semi-definite matrix.
    for (auto &l : lambda)
        l = std::sqrt(std::max(l, 0.0));

    const CMatrix &U = solver.eigenvectors();
    CMatrix S = U * lambda.asDiagonal() * U.adjoint();
    return 0.5 * (S + S.adjoint());
}

double spectral_norm(const CMatrix &A)
{
    if (A.size() == 0)
        return 0.0;
    return singular_values(A)(0);
}

CMatrix hadamard(const CMatrix &A, const CMatrix &B)
{
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw std::invalid_argument("hadamard: dimension mismatch");
    return A.cwiseProduct(B);
}

// --------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag, std::uint64_t index)
{
    return splitmix64(splitmix64(splitmix64(parent) ^ tag) + index);
}

CMatrix sample_complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng &rng)
{
    if (!(variance > 0.0))
        throw std::invalid_argument("sample_complex_gaussian: variance must be positive");
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("sample_complex_gaussian: negative dimension");

    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    CMatrix out(rows, cols);
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            out(i, j) = cdouble(re, im);
        }
    return out;
}

CVector sample_complex_gaussian(Eigen::Index size, double variance, Rng &rng)
{
    return sample_complex_gaussian(size, 1, variance, rng).col(0);
}

double compensated_sum(std::span<const double> values)
{
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body)
{
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back(worker);
    pool.clear();

    if (failure)
        std::rethrow_exception(failure);
}

double quantile(std::span<const double> values, double level)
{
    if (values.empty())
        throw std::invalid_argument("quantile: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values)
{
    return quantile(values, 0.5);
}

} // namespace irsmimo
