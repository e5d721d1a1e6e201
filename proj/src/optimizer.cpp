// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/optimizer.hpp"

#include "irsmimo/rate.hpp"

#include <cmath>
#include <limits>

namespace irsmimo {

RMatrix real_embed(const CMatrix &C)
{
    const Eigen::Index n = C.rows();
    RMatrix A(2 * n, 2 * n);
    A.topLeftCorner(n, n) = C.real();
    A.topRightCorner(n, n) = -C.imag();
    A.bottomLeftCorner(n, n) = C.imag();
    A.bottomRightCorner(n, n) = C.real();
    return A;
}

RMatrix real_embed(const CovarianceSet &cov, std::size_t k)
{
    return real_embed(cbar_matrix(cov, k));
}

RVector embed_vector(const CVector &v)
{
    RVector b(2 * v.size());
    b << v.real(), v.imag();
    return b;
}

RVector embed_phi(const ReflectionPattern &phi)
{
    return embed_vector(phi.coefficients());
}

ReflectionPattern unembed(const RVector &b)
{
    if (b.size() % 2 != 0)
        throw std::invalid_argument("unembed: odd length");
    const Eigen::Index n = b.size() / 2;
    CVector phi(n);
    for (Eigen::Index i = 0; i < n; ++i)
        phi(i) = cdouble(b(i), b(i + n));
    return ReflectionPattern(std::move(phi));
}

double rate_constant(const CovarianceSet &cov, std::size_t k, double target_bps, int T, double sigma2)
{
    const int K = static_cast<int>(cov.users());
    if (T <= K)
        throw std::invalid_argument("rate_constant: T must exceed K");
    if (!(target_bps >= 0.0))
        throw std::invalid_argument("rate_constant: negative rate target");
    const double snr = std::expm1(target_bps * T / (T - K) * std::log(2.0));
    return snr * sigma2 / (static_cast<double>(cov.bs_antennas()) * cov.beta_IU.at(k) * cov.beta_BI);
}

double feasible_power(const CovarianceSet &cov, const ReflectionPattern &phi, std::size_t k, double target_bps, int T,
                      double sigma2)
{
    const double c = rate_constant(cov, k, target_bps, T, sigma2);
    if (c == 0.0)
        return 0.0;
    const double form = quadratic_form(cbar_matrix(cov, k), phi.coefficients());
    if (!(form > 0.0) || !std::isfinite(c))
        throw std::domain_error("feasible_power: rate target unreachable with this pattern");
    return c / form;
}

double taylor_lower_bound(const RMatrix &A, const RVector &b, const RVector &b_bar)
{
    const RVector Ab = A * b_bar;
    return b_bar.dot(Ab) + 2.0 * Ab.dot(b - b_bar);
}

// --------------------------------------------------------------------------

namespace {

void project_to_disks(RVector &b)
{
    const Eigen::Index n = b.size() / 2;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = std::hypot(b(i), b(i + n));
        if (r > 1.0) {
            b(i) /= r;
            b(i + n) /= r;
        }
    }
}

double disk_residual(const RVector &b)
{
    const Eigen::Index n = b.size() / 2;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        worst = std::max(worst, b(i) * b(i) + b(i + n) * b(i + n) - 1.0);
    return worst;
}

struct LinearizedObjective
{
    const RMatrix &G;
    const RVector &s;
    const RVector &c;
    RVector floor; // domain guard per user
    double scale = 1.0;

    // Returns +inf outside the guarded domain.
    double value(const RVector &b, RVector &l) const
    {
        l = 2.0 * (G.transpose() * b) - s;
        double f = 0.0;
        for (Eigen::Index k = 0; k < c.size(); ++k) {
            if (c(k) == 0.0)
                continue;
            if (!(l(k) > floor(k)))
                return std::numeric_limits<double>::infinity();
            f += c(k) / l(k);
        }
        return f * scale;
    }

    RVector gradient(const RVector &l) const
    {
        RVector w(c.size());
        for (Eigen::Index k = 0; k < c.size(); ++k)
            w(k) = c(k) == 0.0 ? 0.0 : -2.0 * c(k) / (l(k) * l(k));
        return G * w * scale;
    }
};

} // namespace

P2Result solve_p2_linearized(const RMatrix &G, const RVector &s, const RVector &c, const RVector &start,
                             const P2Options &options)
{
    const Eigen::Index K = c.size();
    if (G.cols() != K || s.size() != K || G.rows() != start.size() || start.size() % 2 != 0)
        throw std::invalid_argument("solve_p2: inconsistent dimensions");
    for (Eigen::Index k = 0; k < K; ++k) {
        if (!(c(k) >= 0.0))
            throw std::invalid_argument("solve_p2: negative rate constant");
        if (c(k) > 0.0 && !(s(k) > 0.0))
            throw std::invalid_argument("solve_p2: tangent value must be positive");
    }

    LinearizedObjective obj{G, s, c, 1e-12 * s.cwiseMax(0.0), 1.0};
    P2Result out;
    out.b = start;
    project_to_disks(out.b);

    RVector l;
    double f = obj.value(out.b, l);
    if (!std::isfinite(f))
        throw std::invalid_argument("solve_p2: start point outside the domain");
    if (f == 0.0) {
        out.p.assign(K, 0.0);
        return out;
    }
    obj.scale = 1.0 / f;
    f = 1.0;

    double t = 1.0;
    RVector grad = obj.gradient(l);
    RVector candidate, l_new;
    for (int it = 1; it <= options.max_iter; ++it) {
        out.iterations = it;
        RVector unit_step = out.b - grad;
        project_to_disks(unit_step);
        out.projected_gradient_norm = (unit_step - out.b).norm();
        if (out.projected_gradient_norm <= options.tol)
            break;

        // Backtracking on the quadratic upper bound of the projected step.
        double f_new = std::numeric_limits<double>::infinity();
        for (int attempt = 0; attempt < 60; ++attempt) {
            candidate = out.b - t * grad;
            project_to_disks(candidate);
            const RVector d = candidate - out.b;
            f_new = obj.value(candidate, l_new);
            if (std::isfinite(f_new) && f_new <= f + grad.dot(d) + d.squaredNorm() / (2.0 * t))
                break;
            t *= 0.5;
        }
        if (!std::isfinite(f_new) || f_new > f)
            break; // no descent left at machine precision

        const double decrease = f - f_new;
        out.b = candidate;
        l = l_new;
        f = f_new;
        grad = obj.gradient(l);
        t *= 2.0;
        if (decrease < options.tol * f)
            break;
        if (it == options.max_iter)
            throw NumericalError("solve_p2: no convergence after " + std::to_string(options.max_iter) +
                                 " iterations (projected gradient norm " +
                                 std::to_string(out.projected_gradient_norm) + ")");
    }

    l = 2.0 * (G.transpose() * out.b) - s;
    out.p.resize(K);
    for (Eigen::Index k = 0; k < K; ++k)
        out.p[k] = c(k) == 0.0 ? 0.0 : c(k) / l(k);
    out.sum_power = compensated_sum(out.p);
    return out;
}

P2Result solve_p2(const std::vector<RMatrix> &A, const RVector &b_bar, const RVector &c, const P2Options &options)
{
    const auto K = static_cast<Eigen::Index>(A.size());
    RMatrix G(b_bar.size(), K);
    RVector s(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        G.col(k) = A[k] * b_bar;
        s(k) = b_bar.dot(G.col(k));
    }
    return solve_p2_linearized(G, s, c, b_bar, options);
}

// --------------------------------------------------------------------------

ScaResult sca_optimize(const CovarianceSet &cov, const std::vector<double> &targets_bps, int T, double sigma2,
                       Rng &rng, const ScaOptions &options)
{
    const std::size_t K = cov.users();
    const Eigen::Index N = cov.irs_elements();
    if (targets_bps.size() != K)
        throw std::invalid_argument("sca_optimize: one target per user");
    if (!(options.delta > 0.0) || options.max_iter < 1)
        throw std::invalid_argument("sca_optimize: delta and max_iter must be positive");

    RVector c(K);
    for (std::size_t k = 0; k < K; ++k)
        c(k) = rate_constant(cov, k, targets_bps[k], T, sigma2);
    std::vector<CMatrix> cbar;
    for (std::size_t k = 0; k < K; ++k)
        cbar.push_back(cbar_matrix(cov, k));

    RVector b = embed_phi(options.init == ScaInit::AllOne ? ReflectionPattern::all_ones(N)
                                                          : make_pattern(N, PatternKind::UnitAmpRandPhase, rng));

    RMatrix G(2 * N, K);
    RVector s(K);
    auto tangent = [&](const RVector &at) {
        const CVector phi = unembed(at).coefficients();
        for (std::size_t k = 0; k < K; ++k) {
            const CVector g = cbar[k] * phi;
            G.col(k) = embed_vector(g);
            s(k) = phi.dot(g).real();
        }
    };
    auto true_power = [&]() {
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            if (c(k) > 0.0)
                total += c(k) / s(k);
        return total;
    };

    ScaResult result;
    tangent(b);
    result.trace.iterations.push_back({0, true_power(), true_power(), 0.0, disk_residual(b)});

    std::vector<double> p(K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
        p[k] = c(k) > 0.0 ? c(k) / s(k) : 0.0;

    for (int it = 1; it <= options.max_iter; ++it) {
        const P2Result sub = solve_p2_linearized(G, s, c, b, options.inner);
        const double step = (sub.b - b).squaredNorm();
        b = sub.b;
        p = sub.p;
        tangent(b);
        result.trace.iterations.push_back({it, sub.sum_power, true_power(), step, disk_residual(b)});
        if (step <= options.delta) {
            result.trace.converged = true;
            break;
        }
    }

    PowerSolution &sol = result.solution;
    sol.phi = unembed(b);
    sol.p = p;
    sol.sum_power = compensated_sum(p);
    const double MN = static_cast<double>(cov.bs_antennas()) * static_cast<double>(N);
    for (std::size_t k = 0; k < K; ++k)
        sol.rates.push_back(asymptotic_rate(cov, sol.phi, k, p[k] * MN, sigma2, T, static_cast<int>(K)));
    return result;
}

ReflectionPattern benchmark_patterns(Eigen::Index N, const std::string &kind, Rng &rng)
{
    return make_pattern(N, pattern_kind_from_string(kind), rng);
}

std::vector<ComparisonRow> compare_sum_power(const CovarianceSet &cov, const std::vector<double> &targets_bps, int T,
                                             double sigma2, const std::vector<std::string> &schemes, Rng &rng,
                                             const ScaOptions &options)
{
    if (targets_bps.size() != cov.users())
        throw std::invalid_argument("compare_sum_power: one target per user");
    double mean_target = 0.0;
    for (double r : targets_bps)
        mean_target += r / static_cast<double>(targets_bps.size());

    std::vector<ComparisonRow> rows;
    for (const auto &scheme : schemes) {
        double total = 0.0;
        if (scheme == "sca") {
            total = sca_optimize(cov, targets_bps, T, sigma2, rng, options).solution.sum_power;
        } else {
            const ReflectionPattern phi = benchmark_patterns(cov.irs_elements(), scheme, rng);
            for (std::size_t k = 0; k < cov.users(); ++k)
                total += feasible_power(cov, phi, k, targets_bps[k], T, sigma2);
        }
        rows.push_back({scheme, mean_target, total});
    }
    return rows;
}

} // namespace irsmimo
