#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "creature_lab/candidate.hpp"
#include "creature_lab/star/star_profile.hpp"

namespace creature_lab {

/// Calls `fn(h)` for every h ⊇ g with |h \ g| <= max_new over coordinates
/// below N: fewer new coordinates first, then lexicographic coordinate
/// sets, then values counted in binary. Stops early when fn returns false.
void for_each_extension(const PartialMap& g, unsigned N, std::uint64_t max_new,
                        const std::function<bool(const PartialMap&)>& fn);

/// All letters f < 2^N with g ⊆ f, ascending.
std::vector<Letter> compatible_letters(const PartialMap& g, unsigned N);

/// The star triple over a profile. Paper-exact profiles can be inspected
/// but not enumerated.
class StarTriple final : public MeasuredTriple {
public:
    explicit StarTriple(StarProfile profile, Guards guards = Guards{});

    const StarProfile& profile() const { return profile_; }

    Family family() const override { return Family::star; }
    bool valid_letter(unsigned level, Letter letter) const override;
    std::vector<std::string> violations(const Creature& t) const override;
    FunctionalSet functionals(const Creature& t) const override;
    std::vector<Creature> compositions(const Creature& t) const override;
    bool in_composition(const Creature& s, const Creature& t) const override;
    std::optional<BestComposition> best_composition(const Creature& t, std::span<const Rational> r,
                                                    const Rational& min_norm,
                                                    const std::vector<bool>& allowed) const override;

    /// Largest norm n <= upper with |g| <= cap(k, k-n), if any is >= lower.
    std::optional<unsigned> best_norm(unsigned k, std::size_t g_size, unsigned lower, unsigned upper) const;

    /// 2^{|h|-N_k} * sum{ r_f : f in P_t, h ⊆ f } with r aligned to t.letters.
    Rational normalized_sum(const Creature& t, std::span<const Rational> r, const PartialMap& h) const;

private:
    StarProfile profile_;
};

/// A star creature; letters are sorted and deduplicated.
Creature make_star_creature(unsigned k, Node eta, unsigned norm, PartialMap g, std::vector<Letter> letters);

/// Every valid creature at (k, eta) with norm in [norm_lo, norm_hi], in
/// canonical order.
std::vector<Creature> enumerate_creatures(const StarTriple& triple, unsigned k, const Node& eta, unsigned norm_lo,
                                          unsigned norm_hi);

std::vector<Creature> sigma_star(const StarTriple& triple, const Creature& t);

FunctionalSet functionals_star(const StarTriple& triple, const Creature& t);

/// The one-row average sum r / 2^{N_k - |g_t|}.
FunctionalSet auxiliary_average(const StarTriple& triple, const Creature& t);

/// Same skeleton, every creature widened to P = {f : g ⊆ f} with g and norm
/// kept. Nodes added by the widening are completed up to the height with
/// full creatures (g empty, norm k).
FiniteCandidate cover_star(const StarTriple& triple, const FiniteCandidate& s);

}  // namespace creature_lab
