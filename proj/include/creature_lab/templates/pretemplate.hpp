#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "creature_lab/candidate.hpp"
#include "creature_lab/rational.hpp"

namespace creature_lab {

/// One boundary node per coordinate, in increasing label order.
using YTuple = std::vector<Node>;

std::string to_string(const YTuple& y);
YTuple parse_ytuple(const std::string& text);

/// A finite pre-template. Coordinate i has label w[i], family z[i] and
/// height k[i]. The first coordinate carries a single candidate; coordinate
/// i > 0 carries a candidate for every element of Y[i-1], stored in
/// later[i-1]. Y is derived by build_pretemplate.
struct PreTemplate {
    std::vector<BigInt> w;
    std::vector<Family> z;
    std::vector<unsigned> k;
    FiniteCandidate first;
    std::vector<std::map<YTuple, FiniteCandidate>> later;
    std::vector<std::set<YTuple>> Y;

    std::size_t size() const { return w.size(); }
    const std::set<YTuple>& y_star() const { return Y.back(); }
    /// Index of a label in w, or size() when absent.
    std::size_t index_of(const BigInt& label) const;
    /// c at coordinate i and argument y (y ignored for i = 0).
    const FiniteCandidate& candidate(std::size_t i, const YTuple& y) const;

    friend bool operator==(const PreTemplate&, const PreTemplate&) = default;
};

/// Checks labels (strictly increasing), heights, families and argument sets,
/// and computes the Y-systems level by level. Throws InputError.
PreTemplate build_pretemplate(std::vector<BigInt> w, std::vector<Family> z, std::vector<unsigned> k,
                              FiniteCandidate first, std::vector<std::map<YTuple, FiniteCandidate>> later,
                              std::size_t max_tuples = 1'000'000);

/// Validates every candidate against the triple of its family.
std::vector<std::string> validate_template_candidates(const PreTemplate& t, const MeasuredTriple& random,
                                                      const MeasuredTriple& star);

/// Coordinates with label < zeta. Restricting below the first label is an
/// InputError.
PreTemplate restrict_template(const PreTemplate& t, const BigInt& zeta);

/// t ≼ t': clause (α) on labels and heights, clause (β) on end-extension
/// of candidates along the Y-systems of t'.
bool properly_extends(const PreTemplate& t, const PreTemplate& t2, std::string* why = nullptr);

/// Relabels w to 0..n-1 in order.
PreTemplate canonical_form(const PreTemplate& t);
bool isomorphic(const PreTemplate& a, const PreTemplate& b);

/// The tuple of t' restricted to the coordinates and heights of t. Returns
/// false if some coordinate of t is missing from t'.
bool project_tuple(const PreTemplate& from, const YTuple& y, const PreTemplate& onto, YTuple& out);

/// A finite prefix of a weak template with a name. names[n] maps Y_* of
/// templates[n] to bit strings of length n.
struct NamedPrefix {
    std::vector<PreTemplate> templates;
    std::vector<std::map<YTuple, std::string>> names;
};

struct NamedPrefixViolation {
    std::size_t index = 0;
    std::string tuple;  // empty for whole-template violations
    std::string message;
};

std::vector<NamedPrefixViolation> validate_named_prefix(const NamedPrefix& p);

/// h_p on every node of a cover-shaped candidate: the root maps to the
/// empty string and pos(t_eta), in increasing letter order, onto the
/// |pos|-many extensions of h_p(eta) by log2 |pos| bits (most significant
/// bit first). Throws InputError when some |pos| is not a power of two.
std::map<Node, std::string> covering_map(const FiniteCandidate& s);

struct CoveringReport {
    bool blocks_bijective = false;  // each pos-set lands on a full bit-block
    bool prefix_free = false;       // on the boundary
    Rational kraft_sum;             // sum of 2^{-|h(nu)|} over the boundary
    bool uniform_length = false;    // every boundary string has one length
    bool injective_per_level = false;
};

CoveringReport check_covering_map(const FiniteCandidate& s, const std::map<Node, std::string>& h);

}  // namespace creature_lab
