#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "creature_lab/node.hpp"
#include "creature_lab/rational.hpp"

namespace creature_lab {

enum class Family { star, random };

std::string_view family_name(Family family);
Family parse_family(std::string_view text);

/// One node's local tree creature. `letters` is the set P (sorted,
/// distinct); pos(t) is {stem^f : f in P}. `g` is only meaningful for the
/// star family.
struct Creature {
    Family family = Family::random;
    unsigned level = 0;
    Node stem;
    Rational norm;
    PartialMap g;
    std::vector<Letter> letters;

    std::vector<Node> pos() const;

    /// Position of `letter` in `letters`, or npos.
    std::size_t index_of(Letter letter) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const Creature& a, const Creature& b) {
        return a.family == b.family && a.level == b.level && a.stem == b.stem && a.norm == b.norm &&
               a.g == b.g && a.letters == b.letters;
    }
};

/// The canonical order used by every search: larger norm first, then larger
/// pos-set, then lexicographic pos-set, then smaller g. A creature always
/// precedes its proper compositions with the same norm.
bool creature_less(const Creature& a, const Creature& b);

/// `sub` ⊆ `super` for sorted letter lists.
bool letters_subset(const std::vector<Letter>& sub, const std::vector<Letter>& super);

std::string describe(const Creature& creature);

}  // namespace creature_lab
