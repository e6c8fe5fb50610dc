#pragma once

#include <vector>

#include "creature_lab/triple.hpp"

namespace creature_lab {

struct FiniteCandidate;

/// Binary creatures with the arithmetic-mean average F(r) = sum r / 2.
/// The norm of a creature is its level.
class RandomTriple final : public MeasuredTriple {
public:
    explicit RandomTriple(Guards guards = Guards{}) : MeasuredTriple(guards) {}

    Family family() const override { return Family::random; }
    bool valid_letter(unsigned, Letter letter) const override { return letter < 2; }
    std::vector<std::string> violations(const Creature& t) const override;
    FunctionalSet functionals(const Creature& t) const override;
    std::vector<Creature> compositions(const Creature& t) const override;
    bool in_composition(const Creature& s, const Creature& t) const override;
    std::optional<BestComposition> best_composition(const Creature& t, std::span<const Rational> r,
                                                    const Rational& min_norm,
                                                    const std::vector<bool>& allowed) const override;
};

/// The creature at `eta` (level = |eta|) with letter set P.
Creature creature_r(const Node& eta, std::vector<Letter> letters);

std::vector<Creature> sigma_r(const Creature& t);

/// sum over boundary nodes of f(nu) * 2^{-(|nu| - |root|)}, computed
/// without the recursion.
Rational dyadic_oracle(const FiniteCandidate& s, const Valuation& f);

}  // namespace creature_lab
