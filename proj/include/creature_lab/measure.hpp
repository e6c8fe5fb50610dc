#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "creature_lab/candidate.hpp"

namespace creature_lab {

/// A validated candidate flattened for the measure recursion. Nodes are
/// ordered by (length, lexicographic), so the children of every internal
/// node occupy a contiguous index range in letter order.
class CompiledCandidate {
public:
    CompiledCandidate(const MeasuredTriple& triple, const FiniteCandidate& s);

    const FiniteCandidate& candidate() const { return candidate_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t index_of(const Node& node) const;

    /// Boundary nodes, in index order, are nodes()[boundary_begin()..].
    std::size_t boundary_begin() const { return boundary_begin_; }
    std::size_t boundary_size() const { return nodes_.size() - boundary_begin_; }

    bool internal(std::size_t i) const { return i < boundary_begin_; }
    std::size_t child_begin(std::size_t i) const { return child_begin_[i]; }
    std::size_t child_end(std::size_t i) const { return child_end_[i]; }
    const FunctionalSet& functionals(std::size_t i) const { return functionals_[i]; }

    /// Boundary values in index order from a valuation total on max(s).
    std::vector<Rational> boundary_vector(const Valuation& f) const;

    /// Measure values for every node (index order). The parallel kernel
    /// sweeps one level at a time; the serial one is a plain loop.
    std::vector<Rational> values(std::span<const Rational> boundary, bool parallel = true) const;

    MeasureMap to_map(std::span<const Rational> values) const;

private:
    FiniteCandidate candidate_;
    std::vector<Node> nodes_;
    std::vector<std::size_t> level_begin_;  // by relative level, plus end sentinel
    std::size_t boundary_begin_ = 0;
    std::vector<std::size_t> child_begin_;
    std::vector<std::size_t> child_end_;
    std::vector<FunctionalSet> functionals_;
};

/// The measure recursion for a boundary valuation f.
MeasureMap mval(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f);

/// Definition-literal recursion through eval_F on node maps. Slow; kept as
/// the reference for differential tests.
MeasureMap mval_reference(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f);

/// mu^{1_A}(root) for the level-m front A.
Rational front_value(const MeasuredTriple& triple, const FiniteCandidate& s, unsigned m);

enum class SemiVerdict { exact, semi, neither };

std::string_view verdict_name(SemiVerdict verdict);

struct NodeComparison {
    Node node;
    Rational value;
    Rational average;  // F of the successors' values
};

struct SemiMeasureReport {
    SemiVerdict verdict = SemiVerdict::exact;
    std::vector<NodeComparison> internal;  // every internal node
    std::vector<Node> failing;             // value > average
    std::vector<Node> strict;              // value < average
};

/// Compares mu(eta) with F(mu o suc) at every internal node.
SemiMeasureReport check_semi_measure(const MeasuredTriple& triple, const FiniteCandidate& s, const MeasureMap& mu);

}  // namespace creature_lab
