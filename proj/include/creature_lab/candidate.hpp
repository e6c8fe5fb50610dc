#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "creature_lab/triple.hpp"

namespace creature_lab {

/// A finite tree of uniform height with a creature at every internal node.
/// `height` is the absolute level of the boundary; the root sits at level
/// |root| <= height.
struct FiniteCandidate {
    Family family = Family::random;
    Node root;
    unsigned height = 0;
    std::set<Node> tree;
    std::map<Node, Creature> creatures;

    /// Grows the tree from `root` through the creatures' pos-sets, stopping
    /// at `height` or at nodes without a creature.
    static FiniteCandidate from_creatures(Family family, Node root, unsigned height,
                                          std::map<Node, Creature> creatures);

    unsigned root_level() const { return static_cast<unsigned>(root.size()); }
    std::vector<Node> level(unsigned absolute_level) const;
    std::vector<Node> boundary() const { return level(height); }
    bool contains(const Node& node) const { return tree.count(node) != 0; }

    friend bool operator==(const FiniteCandidate&, const FiniteCandidate&) = default;
};

struct CandidateReport {
    std::vector<std::string> violations;
    /// Minimum creature norm per level (levels without creatures omitted).
    std::map<unsigned, Rational> min_norm;

    bool ok() const { return violations.empty(); }
};

CandidateReport validate_candidate(const MeasuredTriple& triple, const FiniteCandidate& s);

/// Throws InputError naming the first violations.
void require_valid_candidate(const MeasuredTriple& triple, const FiniteCandidate& s);

/// The part of `s` at levels <= m (m between the root level and the height).
FiniteCandidate truncate_candidate(const FiniteCandidate& s, unsigned m);

/// s^[nu]: the nodes comparable with nu, rooted at nu.
FiniteCandidate subtree(const FiniteCandidate& s, const Node& nu);

/// True iff roots agree, ht(s1) >= ht(s0), S^0 ⊆ S^1 and the creatures
/// agree on the internal nodes of s0.
bool end_extends(const FiniteCandidate& s0, const FiniteCandidate& s1);

}  // namespace creature_lab
