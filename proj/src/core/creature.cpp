#include "creature_lab/creature.hpp"

#include <algorithm>

#include "creature_lab/errors.hpp"

namespace creature_lab {

std::string_view family_name(Family family) { return family == Family::star ? "star" : "random"; }

Family parse_family(std::string_view text) {
    if (text == "star") return Family::star;
    if (text == "random") return Family::random;
    throw InputError("unknown family \"" + std::string(text) + "\"");
}

std::vector<Node> Creature::pos() const {
    std::vector<Node> out;
    out.reserve(letters.size());
    for (Letter f : letters) out.push_back(extend(stem, f));
    return out;
}

std::size_t Creature::index_of(Letter letter) const {
    auto it = std::lower_bound(letters.begin(), letters.end(), letter);
    if (it == letters.end() || *it != letter) return npos;
    return static_cast<std::size_t>(it - letters.begin());
}

bool creature_less(const Creature& a, const Creature& b) {
    if (a.norm != b.norm) return a.norm > b.norm;
    if (a.letters.size() != b.letters.size()) return a.letters.size() > b.letters.size();
    if (a.letters != b.letters) return a.letters < b.letters;
    if (!(a.g == b.g)) return partial_map_less(a.g, b.g);
    if (a.level != b.level) return a.level < b.level;
    return a.stem < b.stem;
}

bool letters_subset(const std::vector<Letter>& sub, const std::vector<Letter>& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

std::string describe(const Creature& creature) {
    std::string out = std::string(family_name(creature.family)) + " creature at " + to_string(creature.stem) +
                      " (k=" + std::to_string(creature.level) + ", norm " + to_string(creature.norm);
    if (creature.family == Family::star) out += ", |g|=" + std::to_string(creature.g.size());
    out += ", |P|=" + std::to_string(creature.letters.size()) + ")";
    return out;
}

}  // namespace creature_lab
