#include "creature_lab/search.hpp"

namespace creature_lab {

std::optional<LargeNode> find_large_node(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f,
                                         const Rational& eps) {
    if (sgn(eps) <= 0 || eps >= 1) throw InputError("eps must lie strictly between 0 and 1");
    const MeasureMap mu = mval(triple, s, f);
    const Rational bar = 1 - eps;
    std::optional<LargeNode> best;
    for (const auto& [node, value] : mu) {
        if (value < bar) continue;
        // Map order is lexicographic, so only a strictly deeper node wins.
        if (!best || node.size() > best->node.size()) best = LargeNode{node, value};
    }
    return best;
}

Classification classify_candidate(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f) {
    Classification out;
    out.values = mval(triple, s, f);
    for (const auto& [node, value] : out.values) {
        if (sgn(value) <= 0) out.not_positive.push_back(node);
        if (!at_least_double_exp_neg(value, static_cast<unsigned>(node.size()) + 1)) out.below_floor.push_back(node);
    }
    out.normal = out.not_positive.empty();
    out.special = out.below_floor.empty();
    return out;
}

namespace {

struct Option {
    Rational value;
    std::optional<Creature> creature;       // internal nodes only
    std::vector<std::size_t> child_choice;  // index into each child's option list
};

class Specializer {
public:
    Specializer(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f, const Rational& drop)
        : triple_(triple), s_(s), f_(f), drop_(drop) {}

    const std::vector<Option>& options(const Node& eta, bool first_only) {
        auto it = memo_.find(eta);
        if (it != memo_.end()) return it->second;
        std::vector<Option> out;
        const unsigned lvl = static_cast<unsigned>(eta.size());
        if (eta.size() == s_.height) {
            const Rational& v = f_.at(eta);
            if (at_least_double_exp_neg(v, lvl + 1)) out.push_back(Option{v, std::nullopt, {}});
            return memo_.emplace(eta, std::move(out)).first->second;
        }
        const Creature& t = s_.creatures.at(eta);
        for (const Creature& sp : triple_.compositions(t)) {
            if (sp.norm < t.norm - drop_) continue;
            const FunctionalSet F = triple_.functionals(sp);
            std::vector<const std::vector<Option>*> kids;
            bool dead = false;
            for (Letter x : sp.letters) {
                kids.push_back(&options(extend(eta, x), false));
                if (kids.back()->empty()) {
                    dead = true;
                    break;
                }
            }
            if (dead) continue;
            std::vector<std::size_t> odo(kids.size(), 0);
            std::vector<Rational> r(kids.size());
            while (true) {
                check_guard(++explored_, triple_.guards().max_search, "sub-candidate search step");
                for (std::size_t i = 0; i < kids.size(); ++i) r[i] = (*kids[i])[odo[i]].value;
                Rational v = F.evaluate(r);
                if (at_least_double_exp_neg(v, lvl + 1)) {
                    out.push_back(Option{std::move(v), sp, odo});
                    if (first_only) return memo_.emplace(eta, std::move(out)).first->second;
                }
                // Last child varies fastest, so earlier children stay fixed
                // longest: depth-first order.
                std::size_t d = kids.size();
                while (d > 0 && ++odo[d - 1] == kids[d - 1]->size()) odo[--d] = 0;
                if (d == 0) break;
            }
        }
        return memo_.emplace(eta, std::move(out)).first->second;
    }

    void assemble(const Node& eta, std::size_t choice, std::map<Node, Creature>& creatures, Valuation& boundary) {
        const Option& o = memo_.at(eta)[choice];
        if (!o.creature) {
            boundary.emplace(eta, o.value);
            return;
        }
        creatures.emplace(eta, *o.creature);
        for (std::size_t i = 0; i < o.creature->letters.size(); ++i) {
            assemble(extend(eta, o.creature->letters[i]), o.child_choice[i], creatures, boundary);
        }
    }

    std::size_t explored() const { return explored_; }
    const std::map<Node, std::vector<Option>>& memo() const { return memo_; }

private:
    const MeasuredTriple& triple_;
    const FiniteCandidate& s_;
    const Valuation& f_;
    Rational drop_;
    std::map<Node, std::vector<Option>> memo_;
    std::size_t explored_ = 0;
};

}  // namespace

SpecializeResult specialize_search(const MeasuredTriple& triple, const FiniteCandidate& s, const Valuation& f,
                                   const Rational& drop) {
    CompiledCandidate compiled(triple, s);
    compiled.boundary_vector(f);  // totality and range
    if (sgn(drop) < 0) throw InputError("drop must be nonnegative");
    Specializer search(triple, s, f, drop);
    const auto& root_options = search.options(s.root, true);
    SpecializeResult out;
    if (!root_options.empty()) {
        std::map<Node, Creature> creatures;
        search.assemble(s.root, 0, creatures, out.boundary);
        out.candidate = FiniteCandidate::from_creatures(s.family, s.root, s.height, std::move(creatures));
        const auto check = classify_candidate(triple, *out.candidate, out.boundary);
        if (!check.special) throw LabError("internal error: assembled sub-candidate is not special");
    }
    out.explored = search.explored();
    for (const auto& [node, list] : search.memo()) out.options.emplace(node, list.size());
    return out;
}

}  // namespace creature_lab
