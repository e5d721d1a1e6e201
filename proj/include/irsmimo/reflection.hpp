// SPDX-License-Identifier: Apache-2.0

#ifndef IRSMIMO_REFLECTION_HPP
#define IRSMIMO_REFLECTION_HPP

#include "irsmimo/numeric.hpp"

#include <string>

namespace irsmimo {

/// IRS reflection coefficients φ_n = α_n e^{jθ_n} with α_n ≤ 1.
class ReflectionPattern
{
  public:
    static constexpr double amplitude_slack = 1e-9;

    ReflectionPattern() = default;
    explicit ReflectionPattern(CVector phi);

    static ReflectionPattern all_ones(Eigen::Index n);
    static ReflectionPattern zeros(Eigen::Index n);

    const CVector &coefficients() const { return phi_; }
    Eigen::Index size() const { return phi_.size(); }
    double amplitude(Eigen::Index n) const { return std::abs(phi_(n)); }
    double phase(Eigen::Index n) const { return std::arg(phi_(n)); }

    ReflectionPattern scaled(double factor) const;

  private:
    CVector phi_;
};

enum class PatternKind
{
    AllOne,
    RandAmpRandPhase, // |φ_n| ~ U(0,1], θ_n ~ U(0,2π]
    UnitAmpRandPhase  // |φ_n| = 1, θ_n ~ U(0,2π]
};

std::string to_string(PatternKind kind);
PatternKind pattern_kind_from_string(const std::string &name);

ReflectionPattern make_pattern(Eigen::Index n, PatternKind kind, Rng &rng);

} // namespace irsmimo

#endif
