#include "creature_lab/star/star_triple.hpp"

#include <algorithm>

namespace creature_lab {

namespace {

std::vector<unsigned> free_coordinates(const PartialMap& g, unsigned N) {
    std::vector<unsigned> out;
    for (unsigned i = 0; i < N; ++i) {
        if (!g.defines(i)) out.push_back(i);
    }
    return out;
}

// Visits all j-subsets of `pool` in lexicographic order.
bool for_each_subset(const std::vector<unsigned>& pool, std::size_t j,
                     const std::function<bool(const std::vector<unsigned>&)>& fn) {
    if (j > pool.size()) return true;
    std::vector<std::size_t> idx(j);
    for (std::size_t i = 0; i < j; ++i) idx[i] = i;
    std::vector<unsigned> chosen(j);
    while (true) {
        for (std::size_t i = 0; i < j; ++i) chosen[i] = pool[idx[i]];
        if (!fn(chosen)) return false;
        std::size_t i = j;
        while (i > 0 && idx[i - 1] == pool.size() - j + i - 1) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t m = i; m < j; ++m) idx[m] = idx[m - 1] + 1;
    }
}

bool is_natural(const Rational& x) { return x.get_den() == 1 && sgn(x) >= 0; }

}  // namespace

void for_each_extension(const PartialMap& g, unsigned N, std::uint64_t max_new,
                        const std::function<bool(const PartialMap&)>& fn) {
    const auto pool = free_coordinates(g, N);
    for (std::size_t j = 0; j <= max_new && j <= pool.size(); ++j) {
        const bool go_on = for_each_subset(pool, j, [&](const std::vector<unsigned>& coords) {
            for (std::uint64_t bits = 0; bits < (1ULL << j); ++bits) {
                PartialMap h = g;
                for (std::size_t m = 0; m < j; ++m) h = h.with(coords[m], ((bits >> (j - 1 - m)) & 1U) != 0);
                if (!fn(h)) return false;
            }
            return true;
        });
        if (!go_on) return;
    }
}

std::vector<Letter> compatible_letters(const PartialMap& g, unsigned N) {
    const auto pool = free_coordinates(g, N);
    std::vector<Letter> out;
    out.reserve(std::size_t{1} << pool.size());
    for (std::uint64_t bits = 0; bits < (1ULL << pool.size()); ++bits) {
        Letter f = g.values;
        for (std::size_t m = 0; m < pool.size(); ++m) {
            if ((bits >> m) & 1U) f |= (1ULL << pool[m]);
        }
        out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    return out;
}

StarTriple::StarTriple(StarProfile profile, Guards guards)
    : MeasuredTriple(guards), profile_(std::move(profile)) {}

bool StarTriple::valid_letter(unsigned level, Letter letter) const {
    if (profile_.mode == StarProfile::Mode::paper || level >= profile_.levels()) return false;
    const unsigned n = profile_.N[level];
    return n >= 64 || letter < (1ULL << n);
}

std::vector<std::string> StarTriple::violations(const Creature& t) const {
    std::vector<std::string> out;
    if (t.family != Family::star) out.push_back("family is not star");
    if (profile_.mode == StarProfile::Mode::paper) {
        out.push_back("creatures over the exact profile cannot be materialized");
        return out;
    }
    if (t.level >= profile_.levels()) {
        out.push_back("level " + std::to_string(t.level) + " outside the profile");
        return out;
    }
    const unsigned N = profile_.N[t.level];
    if (t.stem.size() != t.level) out.push_back("stem length differs from the level");
    for (std::size_t i = 0; i < t.stem.size() && i < t.level; ++i) {
        if (!valid_letter(static_cast<unsigned>(i), t.stem[i])) {
            out.push_back("stem letter " + std::to_string(i) + " outside H(" + std::to_string(i) + ")");
        }
    }
    if (!is_natural(t.norm)) {
        out.push_back("norm must be a natural number");
    } else if (t.norm > t.level) {
        out.push_back("norm exceeds the level");
    }
    if (N < 64 && (t.g.domain >> N) != 0) out.push_back("g is defined outside N_k");
    if ((t.g.values & ~t.g.domain) != 0) out.push_back("g has values outside its domain");
    if (is_natural(t.norm) && t.norm <= t.level) {
        const unsigned d = t.level - static_cast<unsigned>(t.norm.get_num().get_ui());
        if (t.g.size() > profile_.cap_at(t.level, d)) {
            out.push_back("|g| = " + std::to_string(t.g.size()) + " exceeds cap(" + std::to_string(t.level) + "," +
                          std::to_string(d) + ")");
        }
    }
    if (t.letters.empty()) out.push_back("P is empty");
    if (!std::is_sorted(t.letters.begin(), t.letters.end()) ||
        std::adjacent_find(t.letters.begin(), t.letters.end()) != t.letters.end()) {
        out.push_back("P is not sorted and distinct");
    }
    for (Letter f : t.letters) {
        if (!valid_letter(t.level, f)) {
            out.push_back("letter " + std::to_string(f) + " outside H(" + std::to_string(t.level) + ")");
            break;
        }
        if (!t.g.extended_by(f)) {
            out.push_back("letter " + std::to_string(f) + " does not extend g");
            break;
        }
    }
    return out;
}

FunctionalSet StarTriple::functionals(const Creature& t) const {
    if (profile_.mode == StarProfile::Mode::paper) {
        throw GuardError("F* rows over the exact profile number 2^{2^{k+3}}-fold binomials of N_k > 2^136");
    }
    const unsigned N = profile_.n_at(t.level);
    const BigInt rows = profile_.row_count(t.level, t.g.size());
    if (!rows.fits_ulong_p()) throw GuardError("F* row count does not fit in a machine word");
    check_guard(rows.get_ui(), guards().max_rows, "F* row");
    check_guard(t.letters.size(), guards().max_pos, "pos");
    std::vector<FunctionalRow> out;
    out.reserve(rows.get_ui());
    for_each_extension(t.g, N, profile_.budget_at(t.level), [&](const PartialMap& h) {
        FunctionalRow row;
        row.scale = pow2(static_cast<long>(h.size()) - static_cast<long>(N));
        for (std::uint32_t i = 0; i < t.letters.size(); ++i) {
            if (h.extended_by(t.letters[i])) row.index.push_back(i);
        }
        out.push_back(std::move(row));
        return true;
    });
    return FunctionalSet(t.letters.size(), std::move(out));
}

std::optional<unsigned> StarTriple::best_norm(unsigned k, std::size_t g_size, unsigned lower, unsigned upper) const {
    for (unsigned n = upper + 1; n-- > lower;) {
        if (n > k) continue;
        if (g_size <= profile_.cap_at(k, k - n)) return n;
    }
    return std::nullopt;
}

std::vector<Creature> StarTriple::compositions(const Creature& t) const {
    require_valid(t);
    const unsigned k = t.level;
    const unsigned N = profile_.n_at(k);
    const auto n_t = static_cast<unsigned>(t.norm.get_num().get_ui());
    std::uint64_t max_cap = 0;
    for (unsigned n = 0; n <= n_t; ++n) max_cap = std::max(max_cap, profile_.cap_at(k, k - n));
    const std::uint64_t max_new = max_cap > t.g.size() ? max_cap - t.g.size() : 0;

    // Count first so the guard fires before anything is materialized.
    std::size_t total = 0;
    for_each_extension(t.g, N, max_new, [&](const PartialMap& h) {
        std::size_t avail = 0;
        for (Letter f : t.letters) avail += h.extended_by(f) ? 1 : 0;
        std::size_t norms = 0;
        for (unsigned n = 0; n <= n_t; ++n) norms += h.size() <= profile_.cap_at(k, k - n) ? 1 : 0;
        if (avail == 0 || norms == 0) return true;
        const std::size_t subsets = avail >= 63 ? SIZE_MAX : (std::size_t{1} << avail) - 1;
        const std::size_t term = subsets > SIZE_MAX / norms ? SIZE_MAX : subsets * norms;
        total = total > SIZE_MAX - term ? SIZE_MAX : total + term;
        return total <= guards().max_sigma;
    });
    check_guard(total, guards().max_sigma, "Sigma* creature");

    std::vector<Creature> out;
    out.reserve(total);
    for_each_extension(t.g, N, max_new, [&](const PartialMap& h) {
        std::vector<Letter> avail;
        for (Letter f : t.letters) {
            if (h.extended_by(f)) avail.push_back(f);
        }
        if (avail.empty()) return true;
        for (unsigned n = 0; n <= n_t; ++n) {
            if (h.size() > profile_.cap_at(k, k - n)) continue;
            for (std::uint64_t mask = 1; mask < (1ULL << avail.size()); ++mask) {
                std::vector<Letter> sub;
                for (std::size_t i = 0; i < avail.size(); ++i) {
                    if ((mask >> i) & 1U) sub.push_back(avail[i]);
                }
                out.push_back(make_star_creature(k, t.stem, n, h, std::move(sub)));
            }
        }
        return true;
    });
    std::sort(out.begin(), out.end(), creature_less);
    return out;
}

bool StarTriple::in_composition(const Creature& s, const Creature& t) const {
    return s.family == Family::star && t.family == Family::star && s.stem == t.stem && s.level == t.level &&
           s.norm <= t.norm && t.g.subset_of(s.g) && letters_subset(s.letters, t.letters) && violations(s).empty();
}

std::optional<BestComposition> StarTriple::best_composition(const Creature& t, std::span<const Rational> r,
                                                            const Rational& min_norm,
                                                            const std::vector<bool>& allowed) const {
    // F*_s is monotone in P_s, so for each g_s the widest admissible P_s and
    // the largest admissible norm dominate every other choice.
    require_valid(t);
    const unsigned k = t.level;
    const unsigned N = profile_.n_at(k);
    const auto n_t = static_cast<unsigned>(t.norm.get_num().get_ui());
    unsigned lower = 0;
    if (sgn(min_norm) > 0) {
        BigInt ceil_norm = min_norm.get_num() / min_norm.get_den();
        if (ceil_norm * min_norm.get_den() != min_norm.get_num()) ceil_norm += 1;
        if (ceil_norm > n_t) return std::nullopt;
        lower = static_cast<unsigned>(ceil_norm.get_ui());
    }
    std::uint64_t max_cap = 0;
    for (unsigned n = lower; n <= n_t; ++n) max_cap = std::max(max_cap, profile_.cap_at(k, k - n));
    const std::uint64_t max_new = max_cap > t.g.size() ? max_cap - t.g.size() : 0;

    std::optional<BestComposition> best;
    std::size_t examined = 0;
    for_each_extension(t.g, N, max_new, [&](const PartialMap& h) {
        check_guard(++examined, guards().max_sigma, "Sigma* search");
        const auto norm = best_norm(k, h.size(), lower, n_t);
        if (!norm) return true;
        std::vector<Letter> sub;
        std::vector<Rational> rs;
        for (std::size_t i = 0; i < t.letters.size(); ++i) {
            if (allowed[i] && h.extended_by(t.letters[i])) {
                sub.push_back(t.letters[i]);
                rs.push_back(r[i]);
            }
        }
        if (sub.empty()) return true;
        Creature s = make_star_creature(k, t.stem, *norm, h, std::move(sub));
        Rational value = functionals(s).evaluate(rs);
        if (!best || value > best->value || (value == best->value && creature_less(s, best->creature))) {
            best = BestComposition{std::move(s), std::move(value)};
        }
        return true;
    });
    return best;
}

Rational StarTriple::normalized_sum(const Creature& t, std::span<const Rational> r, const PartialMap& h) const {
    const unsigned N = profile_.n_at(t.level);
    Rational total = 0;
    for (std::size_t i = 0; i < t.letters.size(); ++i) {
        if (h.extended_by(t.letters[i])) total += r[i];
    }
    total *= pow2(static_cast<long>(h.size()) - static_cast<long>(N));
    return total;
}

Creature make_star_creature(unsigned k, Node eta, unsigned norm, PartialMap g, std::vector<Letter> letters) {
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    Creature t;
    t.family = Family::star;
    t.level = k;
    t.stem = std::move(eta);
    t.norm = norm;
    t.g = g;
    t.letters = std::move(letters);
    return t;
}

std::vector<Creature> enumerate_creatures(const StarTriple& triple, unsigned k, const Node& eta, unsigned norm_lo,
                                          unsigned norm_hi) {
    const StarProfile& p = triple.profile();
    const unsigned N = p.n_at(k);
    std::vector<Creature> out;
    if (norm_lo > norm_hi) return out;
    const std::size_t letters_total = std::size_t{1} << N;
    check_guard(letters_total, triple.guards().max_pos, "H(k) letter");
    for (unsigned n = norm_lo; n <= norm_hi && n <= k; ++n) {
        const std::uint64_t cap = p.cap_at(k, k - n);
        for_each_extension(PartialMap{}, N, cap, [&](const PartialMap& g) {
            const auto universe = compatible_letters(g, N);
            check_guard(universe.size(), 62, "letters compatible with g");
            const std::size_t count = (std::size_t{1} << universe.size()) - 1;
            check_guard(out.size() + count, triple.guards().max_sigma, "creature");
            for (std::uint64_t mask = 1; mask <= count; ++mask) {
                std::vector<Letter> sub;
                for (std::size_t i = 0; i < universe.size(); ++i) {
                    if ((mask >> i) & 1U) sub.push_back(universe[i]);
                }
                out.push_back(make_star_creature(k, eta, n, g, std::move(sub)));
            }
            return true;
        });
    }
    std::sort(out.begin(), out.end(), creature_less);
    return out;
}

std::vector<Creature> sigma_star(const StarTriple& triple, const Creature& t) { return triple.compositions(t); }

FunctionalSet functionals_star(const StarTriple& triple, const Creature& t) { return triple.functionals(t); }

FunctionalSet auxiliary_average(const StarTriple& triple, const Creature& t) {
    const unsigned N = triple.profile().n_at(t.level);
    FunctionalRow row;
    row.scale = pow2(static_cast<long>(t.g.size()) - static_cast<long>(N));
    for (std::uint32_t i = 0; i < t.letters.size(); ++i) row.index.push_back(i);
    return FunctionalSet(t.letters.size(), {row});
}

FiniteCandidate cover_star(const StarTriple& triple, const FiniteCandidate& s) {
    require_valid_candidate(triple, s);
    std::map<Node, Creature> creatures;
    for (const auto& [eta, t] : s.creatures) {
        Creature wide = t;
        wide.letters = compatible_letters(t.g, triple.profile().n_at(t.level));
        creatures.emplace(eta, std::move(wide));
    }
    // Complete the nodes that the widening added.
    std::vector<Node> frontier;
    for (const auto& [eta, t] : creatures) {
        for (Letter f : t.letters) {
            Node nu = extend(eta, f);
            if (!s.contains(nu)) frontier.push_back(std::move(nu));
        }
    }
    while (!frontier.empty()) {
        Node eta = std::move(frontier.back());
        frontier.pop_back();
        if (eta.size() >= s.height) continue;
        const auto k = static_cast<unsigned>(eta.size());
        Creature full = make_star_creature(k, eta, k, PartialMap{}, compatible_letters(PartialMap{}, triple.profile().n_at(k)));
        for (Letter f : full.letters) frontier.push_back(extend(eta, f));
        check_guard(creatures.size() + 1, triple.guards().max_nodes, "cover node");
        creatures.emplace(eta, std::move(full));
    }
    return FiniteCandidate::from_creatures(Family::star, s.root, s.height, std::move(creatures));
}

}  // namespace creature_lab
