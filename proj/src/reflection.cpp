// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/reflection.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace irsmimo {

ReflectionPattern::ReflectionPattern(CVector phi) : phi_(std::move(phi))
{
    for (Eigen::Index n = 0; n < phi_.size(); ++n)
        if (!(std::abs(phi_(n)) <= 1.0 + amplitude_slack))
            throw std::invalid_argument("ReflectionPattern: |phi_n| exceeds 1 at element " +
                                        std::to_string(n));
}

ReflectionPattern ReflectionPattern::all_ones(Eigen::Index n)
{
    return ReflectionPattern(CVector::Ones(n));
}

ReflectionPattern ReflectionPattern::zeros(Eigen::Index n)
{
    return ReflectionPattern(CVector::Zero(n));
}

ReflectionPattern ReflectionPattern::scaled(double factor) const
{
    return ReflectionPattern(phi_ * factor);
}

std::string to_string(PatternKind kind)
{
    switch (kind) {
    case PatternKind::AllOne:
        return "all_one";
    case PatternKind::RandAmpRandPhase:
        return "rand_amp_rand_phase";
    case PatternKind::UnitAmpRandPhase:
        return "unit_amp_rand_phase";
    }
    return "unknown";
}

PatternKind pattern_kind_from_string(const std::string &name)
{
    for (auto kind : {PatternKind::AllOne, PatternKind::RandAmpRandPhase, PatternKind::UnitAmpRandPhase})
        if (to_string(kind) == name)
            return kind;
    throw std::invalid_argument("unknown pattern kind '" + name + "'");
}

ReflectionPattern make_pattern(Eigen::Index n, PatternKind kind, Rng &rng)
{
    if (kind == PatternKind::AllOne)
        return ReflectionPattern::all_ones(n);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CVector phi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // 1 - U[0,1) lies in (0,1].
        const double amplitude = kind == PatternKind::RandAmpRandPhase ? 1.0 - unit(rng) : 1.0;
        const double theta = 2.0 * std::numbers::pi * (1.0 - unit(rng));
        phi(i) = std::polar(amplitude, theta);
    }
    return ReflectionPattern(std::move(phi));
}

} // namespace irsmimo
