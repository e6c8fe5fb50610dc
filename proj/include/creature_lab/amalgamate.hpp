#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "creature_lab/measure.hpp"

namespace creature_lab {

/// A candidate with its boundary valuation.
struct ValuedCandidate {
    FiniteCandidate candidate;
    Valuation boundary;
};

using Schedule = std::function<Rational(unsigned)>;

/// e_l = 2^{1-2^l}.
Schedule default_schedule();

struct AmalgamInput {
    FiniteCandidate p;
    Valuation f;
    std::vector<Node> B;                  // antichain of p
    std::map<Node, ValuedCandidate> q;    // one per element of B, rooted there
    Rational eps;
    Schedule schedule = default_schedule();
};

enum class AmalgamCase { avoid, front, diagnosis };

std::string_view amalgam_case_name(AmalgamCase c);

struct NodeSplit {
    Rational mu;      // mval(p, f) at the node
    Rational bound;   // mu (1 - eps) prod (1 - 3 e_l), internal nodes only
    Rational r0;
    Rational r1;
    std::optional<Creature> s0;
    std::optional<Creature> s1;
};

struct AmalgamResult {
    AmalgamCase kind = AmalgamCase::diagnosis;
    std::optional<ValuedCandidate> q;   // emitted only after verification
    Rational mu_p;                      // mval(p, f)(root)
    Rational r0_root;
    Rational r1_root;
    Rational claimed;                   // bound claimed for mval(q)(root)
    Rational mu_q;                      // recomputed mval(q)(root)
    bool normal = false;                // every mval entry of q positive
    std::map<Node, NodeSplit> nodes;    // the downward induction
    std::map<std::string, bool> hypotheses;
    std::map<std::string, bool> checks; // all true whenever q is emitted
    std::vector<std::string> diagnosis;
};

/// The downward induction producing either a sub-candidate avoiding B
/// (case avoid) or one meeting B in a front with controlled loss (case
/// front). Every claim is re-verified before a candidate is returned.
AmalgamResult amalgamate(const MeasuredTriple& triple, const AmalgamInput& input);

}  // namespace creature_lab
