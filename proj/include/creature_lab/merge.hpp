#pragma once

#include <optional>
#include <vector>

#include "creature_lab/candidate.hpp"

namespace creature_lab {

struct MergeResult {
    bool success = false;
    std::vector<std::size_t> indices;         // members of the chosen class, ascending
    std::vector<FiniteCandidate> prefixes;    // common truncation at each requested level
    std::size_t best_quota = 0;               // size of the largest agreeing class
};

/// Pigeonhole step of the fusion argument: find at least `quota` members of
/// `seq` that agree (tree and creatures) up to every level in `levels`.
/// The largest class wins; ties go to the class whose first member comes
/// first.
MergeResult stabilized_merge(const std::vector<FiniteCandidate>& seq, const std::vector<unsigned>& levels,
                             std::size_t quota);

}  // namespace creature_lab
