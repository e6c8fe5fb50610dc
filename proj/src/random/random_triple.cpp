#include "creature_lab/random/random_triple.hpp"

#include <algorithm>

#include "creature_lab/candidate.hpp"

namespace creature_lab {

std::vector<std::string> RandomTriple::violations(const Creature& t) const {
    std::vector<std::string> out;
    if (t.family != Family::random) out.push_back("family is not random");
    if (t.stem.size() != t.level) out.push_back("stem length differs from the level");
    for (Letter x : t.stem) {
        if (x > 1) {
            out.push_back("stem letter outside {0,1}");
            break;
        }
    }
    if (t.letters.empty()) out.push_back("P is empty");
    if (!std::is_sorted(t.letters.begin(), t.letters.end()) ||
        std::adjacent_find(t.letters.begin(), t.letters.end()) != t.letters.end()) {
        out.push_back("P is not sorted and distinct");
    }
    for (Letter f : t.letters) {
        if (f > 1) out.push_back("letter " + std::to_string(f) + " outside {0,1}");
    }
    if (t.norm != t.level) out.push_back("norm must equal the level");
    if (!t.g.empty()) out.push_back("random creatures carry no partial function");
    return out;
}

FunctionalSet RandomTriple::functionals(const Creature& t) const {
    FunctionalRow row;
    row.scale = Rational(1, 2);
    for (std::uint32_t i = 0; i < t.letters.size(); ++i) row.index.push_back(i);
    return FunctionalSet(t.letters.size(), {row});
}

std::vector<Creature> RandomTriple::compositions(const Creature& t) const { return sigma_r(t); }

bool RandomTriple::in_composition(const Creature& s, const Creature& t) const {
    return s.family == Family::random && t.family == Family::random && s.stem == t.stem && s.level == t.level &&
           s.norm == t.norm && !s.letters.empty() && letters_subset(s.letters, t.letters) && violations(s).empty();
}

std::optional<BestComposition> RandomTriple::best_composition(const Creature& t, std::span<const Rational> r,
                                                              const Rational& min_norm,
                                                              const std::vector<bool>& allowed) const {
    // F^r is a sum, so the widest admissible P wins.
    if (t.norm < min_norm) return std::nullopt;
    std::vector<Letter> sub;
    Rational value = 0;
    for (std::size_t i = 0; i < t.letters.size(); ++i) {
        if (!allowed[i]) continue;
        sub.push_back(t.letters[i]);
        value += r[i];
    }
    if (sub.empty()) return std::nullopt;
    value /= 2;
    return BestComposition{creature_r(t.stem, std::move(sub)), std::move(value)};
}

Creature creature_r(const Node& eta, std::vector<Letter> letters) {
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    if (letters.empty()) throw InputError("random creature needs a nonempty P");
    Creature t;
    t.family = Family::random;
    t.level = static_cast<unsigned>(eta.size());
    t.stem = eta;
    t.norm = t.level;
    t.letters = std::move(letters);
    return t;
}

std::vector<Creature> sigma_r(const Creature& t) {
    std::vector<Creature> out;
    const std::size_t n = t.letters.size();
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
        std::vector<Letter> sub;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1U) sub.push_back(t.letters[i]);
        }
        out.push_back(creature_r(t.stem, std::move(sub)));
    }
    std::sort(out.begin(), out.end(), creature_less);
    return out;
}

Rational dyadic_oracle(const FiniteCandidate& s, const Valuation& f) {
    if (s.family != Family::random) throw InputError("the dyadic oracle applies to random candidates only");
    Rational total = 0;
    for (const Node& nu : s.boundary()) {
        auto it = f.find(nu);
        if (it == f.end()) throw InputError("valuation missing boundary node " + to_string(nu));
        total += it->second * pow2(-static_cast<long>(nu.size() - s.root.size()));
    }
    return total;
}

}  // namespace creature_lab
