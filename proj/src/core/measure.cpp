#include "creature_lab/measure.hpp"

#include <algorithm>

namespace creature_lab {

namespace {

bool length_then_lex(const Node& a, const Node& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

CompiledCandidate::CompiledCandidate(const MeasuredTriple& triple, const FiniteCandidate& s) : candidate_(s) {
    require_valid_candidate(triple, s);
    nodes_.assign(s.tree.begin(), s.tree.end());
    std::sort(nodes_.begin(), nodes_.end(), length_then_lex);

    const std::size_t root_level = s.root.size();
    level_begin_.assign(s.height - root_level + 2, nodes_.size());
    for (std::size_t i = nodes_.size(); i-- > 0;) level_begin_[nodes_[i].size() - root_level] = i;
    boundary_begin_ = level_begin_[s.height - root_level];

    child_begin_.assign(boundary_begin_, 0);
    child_end_.assign(boundary_begin_, 0);
    functionals_.reserve(boundary_begin_);
    std::size_t next_child = level_begin_.size() > 1 ? level_begin_[1] : nodes_.size();
    for (std::size_t i = 0; i < boundary_begin_; ++i) {
        const Creature& t = s.creatures.at(nodes_[i]);
        // Same-length nodes are sorted, so the children of consecutive
        // parents follow one another.
        if (i > 0 && nodes_[i].size() != nodes_[i - 1].size()) {
            next_child = level_begin_[nodes_[i].size() - root_level + 1];
        }
        child_begin_[i] = next_child;
        next_child += t.letters.size();
        child_end_[i] = next_child;
        functionals_.push_back(triple.functionals(t));
    }
}

std::size_t CompiledCandidate::index_of(const Node& node) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node, length_then_lex);
    if (it == nodes_.end() || *it != node) throw InputError("node " + to_string(node) + " is not in the candidate");
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<Rational> CompiledCandidate::boundary_vector(const Valuation& f) const {
    std::vector<Rational> out(boundary_size());
    std::vector<bool> seen(boundary_size(), false);
    for (const auto& [node, value] : f) {
        if (node.size() != candidate_.height || !candidate_.contains(node)) {
            throw InputError("valuation node " + to_string(node) + " is not a boundary node");
        }
        if (!in_unit_interval(value)) {
            throw InputError("valuation value " + to_string(value) + " at " + to_string(node) + " is outside [0,1]");
        }
        const std::size_t j = index_of(node) - boundary_begin_;
        out[j] = value;
        seen[j] = true;
    }
    for (std::size_t j = 0; j < seen.size(); ++j) {
        if (!seen[j]) throw InputError("valuation is not total: missing " + to_string(nodes_[boundary_begin_ + j]));
    }
    return out;
}

std::vector<Rational> CompiledCandidate::values(std::span<const Rational> boundary, bool parallel) const {
    if (boundary.size() != boundary_size()) throw InputError("boundary vector has the wrong length");
    std::vector<Rational> mu(nodes_.size());
    std::copy(boundary.begin(), boundary.end(), mu.begin() + static_cast<std::ptrdiff_t>(boundary_begin_));
    const std::size_t levels = candidate_.height - candidate_.root.size();
    for (std::size_t lvl = levels; lvl-- > 0;) {
        const auto lo = static_cast<std::ptrdiff_t>(level_begin_[lvl]);
        const auto hi = static_cast<std::ptrdiff_t>(level_begin_[lvl + 1]);
        auto step = [&](std::ptrdiff_t i) {
            const auto u = static_cast<std::size_t>(i);
            const std::span<const Rational> kids(mu.data() + child_begin_[u], child_end_[u] - child_begin_[u]);
            mu[u] = functionals_[u].evaluate(kids);
        };
        if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
            for (std::ptrdiff_t i = lo; i < hi; ++i) step(i);
        } else {
            for (std::ptrdiff_t i = lo; i < hi; ++i) step(i);
        }
    }
    return mu;
}

MeasureMap CompiledCandidate::to_map(std::span<const Rational> values) const {
    MeasureMap out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) out.emplace(nodes_[i], values[i]);
    return out;
}

MeasureMap mval(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f) {
    CompiledCandidate compiled(triple, s);
    return compiled.to_map(compiled.values(compiled.boundary_vector(f)));
}

namespace {

Rational reference_value(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f,
                         const Node& eta, MeasureMap& out) {
    Rational value;
    if (eta.size() == s.height) {
        auto it = f.find(eta);
        if (it == f.end()) throw InputError("valuation is not total: missing " + to_string(eta));
        value = it->second;
    } else {
        const Creature& t = s.creatures.at(eta);
        Valuation successors;
        for (const Node& nu : t.pos()) successors.emplace(nu, reference_value(triple, s, f, nu, out));
        value = eval_F(triple, t, successors);
    }
    out.emplace(eta, value);
    return value;
}

}  // namespace

MeasureMap mval_reference(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f) {
    require_valid_candidate(triple, s);
    for (const auto& [node, value] : f) {
        if (node.size() != s.height || !s.contains(node)) {
            throw InputError("valuation node " + to_string(node) + " is not a boundary node");
        }
        if (!in_unit_interval(value)) throw InputError("valuation value outside [0,1]");
    }
    MeasureMap out;
    reference_value(triple, s, f, s.root, out);
    return out;
}

Rational front_value(const MeasuredTriple& triple, const FiniteCandidate& s, unsigned m) {
    const FiniteCandidate cut = truncate_candidate(s, m);
    Valuation ones;
    for (const Node& nu : cut.boundary()) ones.emplace(nu, Rational(1));
    CompiledCandidate compiled(triple, cut);
    return compiled.values(compiled.boundary_vector(ones)).front();
}

std::string_view verdict_name(SemiVerdict verdict) {
    switch (verdict) {
        case SemiVerdict::exact: return "exact";
        case SemiVerdict::semi: return "semi";
        case SemiVerdict::neither: return "neither";
    }
    return "neither";
}

SemiMeasureReport check_semi_measure(const MeasuredTriple& triple, const FiniteCandidate& s, const MeasureMap& mu) {
    require_valid_candidate(triple, s);
    for (const Node& node : s.tree) {
        if (!mu.count(node)) throw InputError("assignment is not total: missing " + to_string(node));
    }
    SemiMeasureReport report;
    for (const auto& [eta, t] : s.creatures) {
        Valuation successors;
        for (const Node& nu : t.pos()) successors.emplace(nu, mu.at(nu));
        NodeComparison cmp{eta, mu.at(eta), eval_F(triple, t, successors)};
        if (cmp.value > cmp.average) report.failing.push_back(eta);
        else if (cmp.value < cmp.average) report.strict.push_back(eta);
        report.internal.push_back(std::move(cmp));
    }
    if (!report.failing.empty()) report.verdict = SemiVerdict::neither;
    else if (!report.strict.empty()) report.verdict = SemiVerdict::semi;
    return report;
}

}  // namespace creature_lab
