#include "creature_lab/merge.hpp"

#include <algorithm>

namespace creature_lab {

MergeResult stabilized_merge(const std::vector<FiniteCandidate>& seq, const std::vector<unsigned>& levels,
                             std::size_t quota) {
    if (seq.empty()) throw InputError("stabilized merge needs at least one candidate");
    const FiniteCandidate& first = seq.front();
    unsigned min_height = first.height;
    for (const auto& s : seq) {
        if (s.family != first.family || s.root != first.root) {
            throw InputError("candidates in a merge must share root and family");
        }
        min_height = std::min(min_height, s.height);
    }
    unsigned top = first.root_level();
    for (unsigned m : levels) {
        if (m < first.root_level() || m > min_height) {
            throw InputError("merge level " + std::to_string(m) + " outside [root level, smallest height]");
        }
        top = std::max(top, m);
    }

    // Agreement at the top level implies agreement at every lower level.
    std::vector<FiniteCandidate> cuts;
    cuts.reserve(seq.size());
    for (const auto& s : seq) cuts.push_back(truncate_candidate(s, top));
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const auto& cls) { return cuts[cls.front()] == cuts[i]; });
        if (it == classes.end()) classes.push_back({i});
        else it->push_back(i);
    }
    const auto best = std::max_element(classes.begin(), classes.end(),
                                       [](const auto& a, const auto& b) { return a.size() < b.size(); });
    MergeResult out;
    out.best_quota = best->size();
    if (best->size() < quota) return out;
    out.success = true;
    out.indices = *best;
    for (unsigned m : levels) out.prefixes.push_back(truncate_candidate(seq[best->front()], m));
    return out;
}

}  // namespace creature_lab
