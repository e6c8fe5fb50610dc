#include "creature_lab/amalgamate.hpp"

#include <algorithm>
#include <set>

#include "creature_lab/niceness.hpp"

namespace creature_lab {

Schedule default_schedule() {
    return [](unsigned level) { return schedule_default(level); };
}

std::string_view amalgam_case_name(AmalgamCase c) {
    switch (c) {
        case AmalgamCase::avoid: return "avoid";
        case AmalgamCase::front: return "front";
        case AmalgamCase::diagnosis: return "diagnosis";
    }
    return "diagnosis";
}

namespace {

bool has_prefix_in(const Node& eta, const std::set<Node>& B, bool proper) {
    for (std::size_t len = 0; len <= eta.size(); ++len) {
        if (proper && len == eta.size()) break;
        if (B.count(truncate(eta, len))) return true;
    }
    return false;
}

void validate_input(const MeasuredTriple& triple, const AmalgamInput& in, const std::set<Node>& B) {
    if (sgn(in.eps) < 0 || in.eps >= 1) throw InputError("eps must lie in [0,1)");
    if (B.size() != in.B.size()) throw InputError("B lists a node twice");
    for (const Node& nu : B) {
        if (!in.p.contains(nu)) throw InputError("B node " + to_string(nu) + " is not in p");
        if (has_prefix_in(nu, B, true)) throw InputError("B is not an antichain at " + to_string(nu));
    }
    if (in.q.size() != B.size()) throw InputError("q must be given for exactly the nodes of B");
    for (const auto& [nu, vq] : in.q) {
        const FiniteCandidate& c = vq.candidate;
        if (!B.count(nu)) throw InputError("q given for " + to_string(nu) + ", which is not in B");
        if (c.root != nu) throw InputError("q at " + to_string(nu) + " has root " + to_string(c.root));
        if (c.height != in.p.height) throw InputError("q at " + to_string(nu) + " has a different height");
        CompiledCandidate compiled(triple, c);
        compiled.boundary_vector(vq.boundary);
        for (const Node& eta : c.tree) {
            if (!in.p.contains(eta)) throw InputError("q at " + to_string(nu) + " leaves the tree of p at " + to_string(eta));
        }
        for (const auto& [eta, t] : c.creatures) {
            if (!triple.in_composition(t, in.p.creatures.at(eta))) {
                throw InputError("q at " + to_string(nu) + ": creature at " + to_string(eta) + " is not in Sigma of p's");
            }
        }
    }
}

Rational product_bound(const Schedule& e, unsigned from, unsigned to) {
    Rational out = 1;
    for (unsigned l = from; l < to; ++l) out *= 1 - 3 * e(l);
    return out;
}

std::vector<Rational> aligned(const Creature& t, const std::map<Node, NodeSplit>& nodes, int side) {
    std::vector<Rational> out;
    out.reserve(t.letters.size());
    for (Letter x : t.letters) {
        const NodeSplit& ns = nodes.at(extend(t.stem, x));
        out.push_back(side == 0 ? ns.r0 : side == 1 ? ns.r1 : Rational(ns.r0 + ns.r1));
    }
    return out;
}

}  // namespace

AmalgamResult amalgamate(const MeasuredTriple& triple, const AmalgamInput& in) {
    const FiniteCandidate& p = in.p;
    CompiledCandidate compiled(triple, p);
    const MeasureMap mu = compiled.to_map(compiled.values(compiled.boundary_vector(in.f)));
    const std::set<Node> B(in.B.begin(), in.B.end());
    validate_input(triple, in, B);

    AmalgamResult out;
    const unsigned k0 = p.root_level();
    const unsigned k = p.height;
    out.mu_p = mu.at(p.root);

    std::map<Node, Rational> mu_q;
    bool q_large = true, q_normal = true;
    for (const auto& [nu, vq] : in.q) {
        const MeasureMap m = mval(triple, vq.candidate, vq.boundary);
        mu_q.emplace(nu, m.at(nu));
        if (m.at(nu) < 1 - in.eps) q_large = false;
        for (const auto& [node, v] : m) {
            if (sgn(v) <= 0) q_normal = false;
        }
    }
    bool p_normal = true, norms_above_two = true;
    for (const auto& [node, v] : mu) {
        if (sgn(v) <= 0) p_normal = false;
    }
    for (const auto& [node, t] : p.creatures) {
        if (t.norm <= 2) norms_above_two = false;
    }
    out.hypotheses = {{"root_level_above_4", k0 > 4},
                      {"eps_at_most_2^-(1+k0)", in.eps <= pow2(-static_cast<long>(k0) - 1)},
                      {"mu_p_above_half", out.mu_p > Rational(1, 2)},
                      {"norms_above_2", norms_above_two},
                      {"p_normal", p_normal},
                      {"q_normal", q_normal},
                      {"q_large", q_large}};

    if (B.empty()) {
        out.kind = AmalgamCase::avoid;
        out.r0_root = out.mu_p;
        out.claimed = out.mu_p;
        out.mu_q = out.mu_p;
        out.normal = p_normal;
        out.q = ValuedCandidate{p, in.f};
        out.checks = {{"avoids_B", true}, {"measure_bound", true}, {"extends_p", true}};
        return out;
    }

    // T[p,A]: nodes with no proper prefix in A. Since the non-B members of A
    // sit on the boundary, that is: no proper prefix in B.
    std::vector<Node> order;
    for (const Node& eta : p.tree) {
        if (!has_prefix_in(eta, B, true)) order.push_back(eta);
    }
    std::stable_sort(order.begin(), order.end(), [](const Node& a, const Node& b) { return a.size() > b.size(); });

    const Rational one_minus_eps = 1 - in.eps;
    for (const Node& eta : order) {
        NodeSplit ns;
        ns.mu = mu.at(eta);
        if (B.count(eta)) {
            ns.r1 = mu_q.at(eta);
        } else if (eta.size() == k) {
            ns.r0 = ns.mu;
        } else {
            const auto L = static_cast<unsigned>(eta.size());
            const Creature& t = p.creatures.at(eta);
            const Rational e_L = in.schedule(L);
            ns.bound = ns.mu * one_minus_eps * product_bound(in.schedule, L, k);
            if (ns.bound >= e_L) {
                const auto r0 = aligned(t, out.nodes, 0);
                const auto r1 = aligned(t, out.nodes, 1);
                if (L + 1 == k) {
                    const auto r = aligned(t, out.nodes, 2);
                    const SplitResult split = beta_split_aligned(triple, t, r, r0, r1, e_L, 1);
                    if (!split.feasible || !split.witness_verified) {
                        out.diagnosis.push_back("split infeasible at " + to_string(eta) + ": " + split.diagnosis);
                        return out;
                    }
                    ns.r0 = split.witness.c0;
                    ns.r1 = split.witness.c1;
                    ns.s0 = split.witness.s0;
                    ns.s1 = split.witness.s1;
                } else {
                    // Pad the dead successors with e_{L+1}, then split once to
                    // isolate the live ones and once more between the sides.
                    const Rational pad = in.schedule(L + 1);
                    std::vector<Rational> star(t.letters.size()), dead(t.letters.size()), live(t.letters.size());
                    for (std::size_t i = 0; i < t.letters.size(); ++i) {
                        const Rational sum = r0[i] + r1[i];
                        star[i] = sgn(sum) > 0 ? sum : pad;
                        (sgn(sum) > 0 ? live : dead)[i] = star[i];
                    }
                    const SplitResult first = beta_split_aligned(triple, t, star, dead, live, e_L, 1);
                    if (!first.feasible || !first.witness_verified) {
                        out.diagnosis.push_back("first split infeasible at " + to_string(eta) + ": " + first.diagnosis);
                        return out;
                    }
                    if (first.witness.s1) {
                        const Creature& t1 = *first.witness.s1;
                        const auto star1 = restrict_aligned(t, star, t1);
                        const auto r01 = restrict_aligned(t, r0, t1);
                        const auto r11 = restrict_aligned(t, r1, t1);
                        const SplitResult second = beta_split_aligned(triple, t1, star1, r01, r11, e_L, 1);
                        if (!second.feasible || !second.witness_verified) {
                            out.diagnosis.push_back("second split infeasible at " + to_string(eta) + ": " +
                                                    second.diagnosis);
                            return out;
                        }
                        ns.r0 = second.witness.c0;
                        ns.r1 = second.witness.c1;
                        ns.s0 = second.witness.s0;
                        ns.s1 = second.witness.s1;
                    }
                    // c1 = 0 leaves no live side; the node is zeroed.
                }
            }
        }
        out.nodes.emplace(eta, std::move(ns));
    }

    const NodeSplit& root = out.nodes.at(p.root);
    out.r0_root = root.r0;
    out.r1_root = root.r1;
    const Rational loss_bar = (1 - pow2(-static_cast<long>(k0))) * out.mu_p;
    int side;
    if (sgn(root.r1) > 0 && root.r1 >= loss_bar) {
        side = 1;
        out.kind = AmalgamCase::front;
    } else if (sgn(root.r0) > 0) {
        side = 0;
        out.kind = AmalgamCase::avoid;
    } else {
        out.diagnosis.push_back("r0 vanishes at the root and r1 = " + to_string(root.r1) + " is below (1-2^-k0) mu = " +
                                to_string(loss_bar));
        return out;
    }
    out.claimed = side == 1 ? root.r1 : root.r0;

    // Grow S_side from the root and graft q_nu (side 1) or p^[nu] (side 0).
    std::map<Node, Creature> creatures;
    Valuation boundary;
    std::vector<Node> todo{p.root};
    while (!todo.empty()) {
        const Node eta = todo.back();
        todo.pop_back();
        if (B.count(eta)) {
            const ValuedCandidate& graft = in.q.at(eta);
            for (const auto& [node, t] : graft.candidate.creatures) creatures.emplace(node, t);
            for (const auto& [node, v] : graft.boundary) boundary.emplace(node, v);
            continue;
        }
        if (eta.size() == k) {
            boundary.emplace(eta, in.f.at(eta));
            continue;
        }
        const NodeSplit& ns = out.nodes.at(eta);
        const std::optional<Creature>& s = side == 1 ? ns.s1 : ns.s0;
        if (!s) {
            out.kind = AmalgamCase::diagnosis;
            out.diagnosis.push_back("no creature chosen at " + to_string(eta) + " on the selected side");
            return out;
        }
        creatures.emplace(eta, *s);
        for (Letter x : s->letters) todo.push_back(extend(eta, x));
    }
    FiniteCandidate q = FiniteCandidate::from_creatures(p.family, p.root, k, std::move(creatures));

    // Verification. Nothing is emitted unless every check passes.
    auto& checks = out.checks;
    checks["valid"] = validate_candidate(triple, q).ok();
    if (checks["valid"]) {
        const MeasureMap mq = mval(triple, q, boundary);
        out.mu_q = mq.at(q.root);
        out.normal = std::all_of(mq.begin(), mq.end(), [](const auto& kv) { return sgn(kv.second) > 0; });
        checks["measure_bound"] = out.mu_q >= out.claimed;
    } else {
        checks["measure_bound"] = false;
    }
    bool extends = q.root == p.root;
    for (const Node& eta : q.tree) extends = extends && p.contains(eta);
    for (const auto& [eta, t] : q.creatures) extends = extends && triple.in_composition(t, p.creatures.at(eta));
    checks["extends_p"] = extends;
    bool norms = true;
    for (const auto& [eta, t] : q.creatures) {
        const bool below_B = std::any_of(B.begin(), B.end(), [&](const Node& nu) { return is_proper_prefix(eta, nu); });
        if ((side == 0 || below_B) && t.norm < p.creatures.at(eta).norm - 2) norms = false;
    }
    checks["norm_drop_at_most_2"] = norms;
    if (side == 1) {
        bool front = true;
        for (const Node& leaf : q.boundary()) front = front && has_prefix_in(leaf, B, false);
        checks["B_front"] = front;
        bool grafts = true;
        for (const Node& nu : B) {
            if (q.contains(nu)) grafts = grafts && subtree(q, nu) == in.q.at(nu).candidate;
        }
        checks["grafts_equal_q"] = grafts;
        checks["loss_bound"] = checks["measure_bound"] && out.mu_q >= loss_bar;
    } else {
        checks["avoids_B"] = std::none_of(B.begin(), B.end(), [&](const Node& nu) { return q.contains(nu); });
    }
    for (const auto& [name, ok] : checks) {
        if (!ok) out.diagnosis.push_back("verification failed: " + name);
    }
    if (!out.diagnosis.empty()) {
        out.kind = AmalgamCase::diagnosis;
        return out;
    }
    out.q = ValuedCandidate{std::move(q), std::move(boundary)};
    return out;
}

}  // namespace creature_lab
