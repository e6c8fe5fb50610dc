#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace creature_lab {

/// A letter of a level alphabet. Star letters are bit strings f: N_k -> 2
/// packed so that bit i of the integer is f(i); random letters are 0 or 1.
using Letter = std::uint64_t;

/// A node of a tree: a finite sequence of letters. Nodes are ordered
/// lexicographically (std::vector's ordering), which is also the order used
/// for every deterministic tie-break.
using Node = std::vector<Letter>;

/// `prefix` is an initial segment of `node` (possibly equal).
inline bool is_prefix(const Node& prefix, const Node& node) {
    return prefix.size() <= node.size() && std::equal(prefix.begin(), prefix.end(), node.begin());
}

inline bool is_proper_prefix(const Node& prefix, const Node& node) {
    return prefix.size() < node.size() && is_prefix(prefix, node);
}

inline Node extend(const Node& node, Letter letter) {
    Node out;
    out.reserve(node.size() + 1);
    out = node;
    out.push_back(letter);
    return out;
}

inline Node truncate(const Node& node, std::size_t length) {
    return Node(node.begin(), node.begin() + static_cast<std::ptrdiff_t>(std::min(length, node.size())));
}

/// "<a.b.c>" for diagnostics.
std::string to_string(const Node& node);
/// Inverse of to_string; throws InputError.
Node parse_node(const std::string& text);

/// A partial function from {0..N-1} to {0,1}, N <= 64.
struct PartialMap {
    std::uint64_t domain = 0;
    std::uint64_t values = 0;  // subset of domain

    std::size_t size() const { return static_cast<std::size_t>(std::popcount(domain)); }
    bool empty() const { return domain == 0; }

    bool defines(unsigned index) const { return ((domain >> index) & 1U) != 0; }
    bool value(unsigned index) const { return ((values >> index) & 1U) != 0; }

    /// The map with index -> bit added (index must not be in the domain).
    PartialMap with(unsigned index, bool bit) const {
        PartialMap out = *this;
        out.domain |= (1ULL << index);
        if (bit) out.values |= (1ULL << index);
        return out;
    }

    /// this ⊆ other as sets of pairs.
    bool subset_of(const PartialMap& other) const {
        return (domain & ~other.domain) == 0 && ((values ^ other.values) & domain) == 0;
    }

    /// this ⊆ f for a total letter f.
    bool extended_by(Letter f) const { return (f & domain) == values; }

    /// Sorted (index, bit) pairs.
    std::vector<std::pair<unsigned, unsigned>> pairs() const;

    friend bool operator==(const PartialMap&, const PartialMap&) = default;
};

/// |g| ascending, then numeric (domain, values).
inline bool partial_map_less(const PartialMap& a, const PartialMap& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    if (a.domain != b.domain) return a.domain < b.domain;
    return a.values < b.values;
}

}  // namespace creature_lab
