#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "creature_lab/creature.hpp"
#include "creature_lab/errors.hpp"
#include "creature_lab/functional_set.hpp"

namespace creature_lab {

/// Exact values on a set of nodes. Used for boundary valuations, creature
/// valuations on pos(t), and the result of the measure recursion.
using Valuation = std::map<Node, Rational>;
using MeasureMap = std::map<Node, Rational>;

struct BestComposition {
    Creature creature;
    Rational value;
};

/// A measured tree creating triple (K, Sigma, F) restricted to what can be
/// enumerated: creature validation, the averaging functions as functional
/// sets, and the composition operation.
class MeasuredTriple {
public:
    explicit MeasuredTriple(Guards guards) : guards_(guards) {}
    virtual ~MeasuredTriple() = default;

    virtual Family family() const = 0;

    /// Letter belongs to the level alphabet H(level).
    virtual bool valid_letter(unsigned level, Letter letter) const = 0;

    /// Empty when the creature belongs to K.
    virtual std::vector<std::string> violations(const Creature& t) const = 0;

    /// F_t as rows over pos(t) (indices follow `t.letters`).
    virtual FunctionalSet functionals(const Creature& t) const = 0;

    /// Sigma(t) in canonical creature order.
    virtual std::vector<Creature> compositions(const Creature& t) const = 0;

    virtual bool in_composition(const Creature& s, const Creature& t) const = 0;

    /// max F_s(r) over s in Sigma(t) with nor[s] >= min_norm and pos(s)
    /// inside the letters flagged in `allowed` (aligned with t.letters);
    /// `r` is aligned with t.letters. Ties go to the canonically first s.
    /// The default enumerates `compositions`.
    virtual std::optional<BestComposition> best_composition(const Creature& t, std::span<const Rational> r,
                                                            const Rational& min_norm,
                                                            const std::vector<bool>& allowed) const;

    const Guards& guards() const { return guards_; }

    /// Throws InputError listing every violation.
    void require_valid(const Creature& t) const;

private:
    Guards guards_;
};

/// r restricted to pos(t) as a vector aligned with t.letters, zero padded.
/// Throws InputError for nodes outside pos(t) or values outside [0,1].
std::vector<Rational> align_valuation(const Creature& t, const Valuation& r);

/// The restriction of an aligned valuation of `t` to the letters of `s`
/// (s must be a composition of t, so pos(s) ⊆ pos(t)).
std::vector<Rational> restrict_aligned(const Creature& t, std::span<const Rational> r, const Creature& s);

/// F_t(r) with r zero padded to pos(t).
Rational eval_F(const MeasuredTriple& triple, const Creature& t, const Valuation& r);

}  // namespace creature_lab
