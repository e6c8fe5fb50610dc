#include "creature_lab/triple.hpp"

namespace creature_lab {

std::optional<BestComposition> MeasuredTriple::best_composition(const Creature& t, std::span<const Rational> r,
                                                                const Rational& min_norm,
                                                                const std::vector<bool>& allowed) const {
    std::optional<BestComposition> best;
    for (const Creature& s : compositions(t)) {
        if (s.norm < min_norm) continue;
        bool inside = true;
        for (Letter f : s.letters) {
            const std::size_t i = t.index_of(f);
            if (i == Creature::npos || !allowed[i]) {
                inside = false;
                break;
            }
        }
        if (!inside) continue;
        const auto rs = restrict_aligned(t, r, s);
        Rational value = functionals(s).evaluate(rs);
        // compositions() is already canonically ordered, so only a strict
        // improvement replaces the incumbent.
        if (!best || value > best->value) best = BestComposition{s, std::move(value)};
    }
    return best;
}

void MeasuredTriple::require_valid(const Creature& t) const {
    const auto problems = violations(t);
    if (problems.empty()) return;
    std::string message = "invalid " + describe(t) + ":";
    for (const auto& p : problems) message += " " + p + ";";
    throw InputError(message);
}

std::vector<Rational> align_valuation(const Creature& t, const Valuation& r) {
    std::vector<Rational> out(t.letters.size(), Rational(0));
    for (const auto& [node, value] : r) {
        if (node.size() != t.stem.size() + 1 || !is_prefix(t.stem, node)) {
            throw InputError("valuation node " + to_string(node) + " is not in pos(t)");
        }
        const std::size_t i = t.index_of(node.back());
        if (i == Creature::npos) throw InputError("valuation node " + to_string(node) + " is not in pos(t)");
        if (!in_unit_interval(value)) {
            throw InputError("valuation value " + to_string(value) + " at " + to_string(node) + " is outside [0,1]");
        }
        out[i] = value;
    }
    return out;
}

std::vector<Rational> restrict_aligned(const Creature& t, std::span<const Rational> r, const Creature& s) {
    std::vector<Rational> out;
    out.reserve(s.letters.size());
    for (Letter f : s.letters) {
        const std::size_t i = t.index_of(f);
        if (i == Creature::npos) throw InputError("letter outside pos(t) while restricting a valuation");
        out.push_back(r[i]);
    }
    return out;
}

Rational eval_F(const MeasuredTriple& triple, const Creature& t, const Valuation& r) {
    const auto aligned = align_valuation(t, r);
    return triple.functionals(t).evaluate(aligned);
}

}  // namespace creature_lab
