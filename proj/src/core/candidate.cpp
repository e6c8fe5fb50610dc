#include "creature_lab/candidate.hpp"

#include <deque>

namespace creature_lab {

FiniteCandidate FiniteCandidate::from_creatures(Family family, Node root, unsigned height,
                                                std::map<Node, Creature> creatures) {
    FiniteCandidate s;
    s.family = family;
    s.root = std::move(root);
    s.height = height;
    s.creatures = std::move(creatures);
    std::deque<Node> todo{s.root};
    while (!todo.empty()) {
        Node node = std::move(todo.front());
        todo.pop_front();
        auto [it, inserted] = s.tree.insert(node);
        if (!inserted || node.size() >= height) continue;
        auto c = s.creatures.find(node);
        if (c == s.creatures.end()) continue;
        for (Letter f : c->second.letters) todo.push_back(extend(node, f));
    }
    return s;
}

std::vector<Node> FiniteCandidate::level(unsigned absolute_level) const {
    std::vector<Node> out;
    for (const Node& node : tree) {
        if (node.size() == absolute_level) out.push_back(node);
    }
    return out;
}

CandidateReport validate_candidate(const MeasuredTriple& triple, const FiniteCandidate& s) {
    CandidateReport report;
    auto& v = report.violations;
    check_guard(s.tree.size(), triple.guards().max_nodes, "candidate node");
    if (triple.family() != s.family) {
        v.push_back("candidate family " + std::string(family_name(s.family)) + " does not match triple family " +
                    std::string(family_name(triple.family())));
        return report;
    }
    if (s.root.size() > s.height) v.push_back("root " + to_string(s.root) + " lies above the height");
    if (!s.contains(s.root)) v.push_back("root " + to_string(s.root) + " missing from the tree");
    for (std::size_t i = 0; i < s.root.size(); ++i) {
        if (!triple.valid_letter(static_cast<unsigned>(i), s.root[i])) {
            v.push_back("root " + to_string(s.root) + ": letter " + std::to_string(i) + " outside its alphabet");
        }
    }

    // Children grouped by parent, used for the suc/pos comparison.
    std::map<Node, std::vector<Letter>> children;
    for (const Node& node : s.tree) {
        if (!is_prefix(s.root, node)) {
            v.push_back("node " + to_string(node) + " does not extend the root");
            continue;
        }
        if (node.size() > s.height) v.push_back("node " + to_string(node) + " lies beyond the height");
        if (node.size() > s.root.size()) {
            const Node parent = truncate(node, node.size() - 1);
            if (!s.contains(parent)) v.push_back("node " + to_string(node) + ": initial segment missing");
            if (!triple.valid_letter(static_cast<unsigned>(node.size() - 1), node.back())) {
                v.push_back("node " + to_string(node) + ": last letter outside its alphabet");
            }
            children[parent].push_back(node.back());
        }
    }
    for (const Node& node : s.tree) {
        if (!is_prefix(s.root, node)) continue;
        const bool has_children = children.count(node) != 0;
        if (!has_children && node.size() != s.height) {
            v.push_back("max(S) not at level m: leaf " + to_string(node) + " at level " +
                        std::to_string(node.size()) + ", height " + std::to_string(s.height));
        }
        if (node.size() >= s.height) continue;
        auto c = s.creatures.find(node);
        if (c == s.creatures.end()) {
            v.push_back("internal node " + to_string(node) + " has no creature");
            continue;
        }
        const Creature& t = c->second;
        if (t.stem != node || t.level != node.size()) {
            v.push_back("creature at " + to_string(node) + ": stem/level disagree with the node");
        }
        for (const auto& problem : triple.violations(t)) v.push_back("creature at " + to_string(node) + ": " + problem);
        auto kids = children.count(node) ? children.at(node) : std::vector<Letter>{};
        std::sort(kids.begin(), kids.end());
        if (kids != t.letters) v.push_back("suc_S(" + to_string(node) + ") differs from pos of its creature");
        auto [it, inserted] = report.min_norm.emplace(static_cast<unsigned>(node.size()), t.norm);
        if (!inserted && t.norm < it->second) it->second = t.norm;
    }
    for (const auto& [node, t] : s.creatures) {
        if (!s.contains(node) || node.size() >= s.height) {
            v.push_back("creature attached to " + to_string(node) + ", which is not an internal node");
        }
    }
    return report;
}

void require_valid_candidate(const MeasuredTriple& triple, const FiniteCandidate& s) {
    const auto report = validate_candidate(triple, s);
    if (report.ok()) return;
    std::string message = "invalid candidate:";
    const std::size_t shown = std::min<std::size_t>(report.violations.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) message += " " + report.violations[i] + ";";
    if (report.violations.size() > shown) {
        message += " (" + std::to_string(report.violations.size() - shown) + " more)";
    }
    throw InputError(message);
}

FiniteCandidate truncate_candidate(const FiniteCandidate& s, unsigned m) {
    if (m < s.root.size() || m > s.height) {
        throw InputError("truncation level " + std::to_string(m) + " outside [" + std::to_string(s.root.size()) +
                         ", " + std::to_string(s.height) + "]");
    }
    FiniteCandidate out;
    out.family = s.family;
    out.root = s.root;
    out.height = m;
    for (const Node& node : s.tree) {
        if (node.size() <= m) out.tree.insert(node);
    }
    for (const auto& [node, t] : s.creatures) {
        if (node.size() < m) out.creatures.emplace(node, t);
    }
    return out;
}

FiniteCandidate subtree(const FiniteCandidate& s, const Node& nu) {
    if (!s.contains(nu)) throw InputError("node " + to_string(nu) + " is not in the candidate");
    FiniteCandidate out;
    out.family = s.family;
    out.root = nu;
    out.height = s.height;
    for (auto it = s.tree.lower_bound(nu); it != s.tree.end() && is_prefix(nu, *it); ++it) out.tree.insert(*it);
    for (auto it = s.creatures.lower_bound(nu); it != s.creatures.end() && is_prefix(nu, it->first); ++it) {
        out.creatures.insert(*it);
    }
    return out;
}

bool end_extends(const FiniteCandidate& s0, const FiniteCandidate& s1) {
    if (s0.family != s1.family || s0.root != s1.root || s1.height < s0.height) return false;
    if (!std::includes(s1.tree.begin(), s1.tree.end(), s0.tree.begin(), s0.tree.end())) return false;
    for (const auto& [node, t] : s0.creatures) {
        auto it = s1.creatures.find(node);
        if (it == s1.creatures.end() || !(it->second == t)) return false;
    }
    return true;
}

}  // namespace creature_lab
