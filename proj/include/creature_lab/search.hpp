#pragma once

#include <optional>
#include <vector>

#include "creature_lab/measure.hpp"

namespace creature_lab {

struct LargeNode {
    Node node;
    Rational value;
};

/// A node whose measure value is at least 1 - eps: deepest level first,
/// then lexicographically least. None when no node qualifies.
std::optional<LargeNode> find_large_node(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f,
                                         const Rational& eps);

struct Classification {
    bool normal = false;
    bool special = false;
    MeasureMap values;
    std::vector<Node> not_positive;  // witnesses against normality
    std::vector<Node> below_floor;   // witnesses against specialness
};

/// Normal: every entry > 0. Special: every entry at eta is at least
/// 2^{-2^{lh(eta)+1}}.
Classification classify_candidate(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f);

struct SpecializeResult {
    std::optional<FiniteCandidate> candidate;  // first special sub-candidate
    Valuation boundary;                        // f restricted to it
    std::size_t explored = 0;                  // choices evaluated
    std::map<Node, std::size_t> options;       // special subtrees per node
};

/// Depth-first search over sub-candidates built from s'_eta in Sigma(s_eta)
/// with nor[s'_eta] >= nor[s_eta] - drop, taking compositions in canonical
/// order. Returns the first special one, or an exhaustion certificate.
SpecializeResult specialize_search(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f,
                                   const Rational& drop);

}  // namespace creature_lab
