#include <gtest/gtest.h>

#include "creature_lab/amalgamate.hpp"
#include "creature_lab/fuzz/fuzz.hpp"
#include "creature_lab/measure.hpp"
#include "creature_lab/merge.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace creature_lab;
using namespace testing_helpers;

TEST(Amalgamate, EmptyAntichain) {
    RandomTriple R;
    FiniteCandidate p = full_random({}, 2);
    AmalgamInput in{p, constant(p, 1), {}, {}, q("1/8")};
    AmalgamResult res = amalgamate(R, in);
    EXPECT_EQ(res.kind, AmalgamCase::avoid);
    ASSERT_TRUE(res.q);
    EXPECT_EQ(res.q->candidate, p);
    EXPECT_EQ(res.mu_q, 1);
}

TEST(Amalgamate, StarWholeBoundary) {
    StarTriple S(uniform_toy_profile(6, 2, 2, 1));
    const Node root{0, 0, 0, 0, 0};
    Creature t = make_star_creature(5, root, 5, {}, all_letters(2));
    FiniteCandidate p = FiniteCandidate::from_creatures(Family::star, root, 6, {{root, t}});
    AmalgamInput in{p, constant(p, 1), p.boundary(), {}, q("1/64")};
    for (const Node& nu : p.boundary()) {
        FiniteCandidate leaf = FiniteCandidate::from_creatures(Family::star, nu, 6, {});
        in.q[nu] = ValuedCandidate{leaf, {{nu, 1}}};
    }
    AmalgamResult res = amalgamate(S, in);
    ASSERT_EQ(res.kind, AmalgamCase::front) << (res.diagnosis.empty() ? "" : res.diagnosis.front());
    ASSERT_TRUE(res.q);
    for (const auto& [name, ok] : res.checks) EXPECT_TRUE(ok) << name;
    const MeasureMap direct = mval(S, res.q->candidate, res.q->boundary);
    EXPECT_EQ(direct.at(root), res.mu_q);
    EXPECT_GE(res.mu_q, res.claimed);
    EXPECT_GE(res.mu_q, (1 - pow2(-5)) * res.mu_p);
}

TEST(Amalgamate, RejectsBadInput) {
    RandomTriple R;
    FiniteCandidate p = full_random({}, 2);
    AmalgamInput chain{p, constant(p, 1), {{0}, {0, 0}}, {}, q("1/8")};
    chain.q[{0}] = ValuedCandidate{subtree(p, {0}), constant(subtree(p, {0}), 1)};
    chain.q[{0, 0}] = ValuedCandidate{subtree(p, {0, 0}), constant(subtree(p, {0, 0}), 1)};
    EXPECT_THROW(amalgamate(R, chain), InputError);

    AmalgamInput wrong_root{p, constant(p, 1), {{0}}, {}, q("1/8")};
    wrong_root.q[{0}] = ValuedCandidate{subtree(p, {1}), constant(subtree(p, {1}), 1)};
    EXPECT_THROW(amalgamate(R, wrong_root), InputError);
}

namespace {

struct Best {
    Rational avoid = -1;
    Rational front = -1;
};

// Every sub-candidate of p, valued by f off B and by q_nu's boundary below B.
Best brute_force(const RandomTriple& R, const AmalgamInput& in) {
    Best best;
    oracle::for_each_random_subcandidate(in.p, [&](const FiniteCandidate& s) {
        bool touches = false, front = true;
        for (const Node& leaf : s.boundary()) {
            bool under = false;
            for (const Node& nu : in.B) under = under || is_prefix(nu, leaf);
            touches = touches || under;
            front = front && under;
        }
        if (!touches) {
            Valuation v;
            for (const Node& leaf : s.boundary()) v[leaf] = in.f.at(leaf);
            best.avoid = std::max(best.avoid, mval(R, s, v).at(s.root));
            return;
        }
        if (!front) return;
        // below B the sub-candidate must coincide with q_nu
        for (const Node& nu : in.B) {
            if (s.contains(nu) && subtree(s, nu) != in.q.at(nu).candidate) return;
        }
        Valuation v;
        for (const Node& leaf : s.boundary()) {
            for (const Node& nu : in.B) {
                if (is_prefix(nu, leaf)) v[leaf] = in.q.at(nu).boundary.at(leaf);
            }
        }
        best.front = std::max(best.front, mval(R, s, v).at(s.root));
    });
    return best;
}

}  // namespace

TEST(Amalgamate, RandomHeightThreeAgainstBruteForce) {
    RandomTriple R;
    Rng rng(12);
    std::size_t emitted = 0;
    for (int trial = 0; trial < 40; ++trial) {
        FiniteCandidate p = fuzz::random_candidate(rng, R, {}, 3);
        const auto& top = p.creatures.at({}).letters;
        Node b{top[rng.below(top.size())]};
        AmalgamInput in{p, fuzz::random_valuation(rng, p, 4), {b}, {}, q("1/16")};
        in.schedule = [](unsigned) { return Rational(1, 64); };
        FiniteCandidate sub = subtree(p, b);
        in.q[b] = ValuedCandidate{sub, constant(sub, 1)};
        AmalgamResult res = amalgamate(R, in);
        if (!res.q) {
            EXPECT_EQ(res.kind, AmalgamCase::diagnosis);
            EXPECT_FALSE(res.diagnosis.empty());
            continue;
        }
        ++emitted;
        const Best best = brute_force(R, in);
        const MeasureMap direct = mval(R, res.q->candidate, res.q->boundary);
        EXPECT_EQ(direct.at({}), res.mu_q);
        EXPECT_GE(res.mu_q, res.claimed);
        if (res.kind == AmalgamCase::avoid) {
            EXPECT_FALSE(res.q->candidate.contains(b));
            EXPECT_LE(res.mu_q, best.avoid);
        } else {
            ASSERT_EQ(res.kind, AmalgamCase::front);
            for (const Node& leaf : res.q->candidate.boundary()) EXPECT_TRUE(is_prefix(b, leaf));
            EXPECT_LE(res.mu_q, best.front);
        }
    }
    EXPECT_GT(emitted, 10U);
}

TEST(Merge, IdenticalCandidates) {
    std::vector<FiniteCandidate> seq(5, full_random({}, 3));
    MergeResult m = stabilized_merge(seq, {1, 2}, 5);
    ASSERT_TRUE(m.success);
    EXPECT_EQ(m.indices, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
    ASSERT_EQ(m.prefixes.size(), 2U);
    EXPECT_EQ(m.prefixes[1], truncate_candidate(seq[0], 2));
    EXPECT_THROW(stabilized_merge({}, {1}, 1), InputError);
}

TEST(Merge, TwoSpecies) {
    FiniteCandidate a = full_random({}, 2);
    FiniteCandidate b = FiniteCandidate::from_creatures(
        Family::random, {}, 2, {{Node{}, creature_r({}, {1})}, {Node{1}, creature_r({1}, {0, 1})}});
    std::vector<FiniteCandidate> seq;
    for (int i = 0; i < 8; ++i) seq.push_back(i % 2 ? b : a);
    MergeResult m = stabilized_merge(seq, {1}, 4);
    ASSERT_TRUE(m.success);
    EXPECT_EQ(m.indices, (std::vector<std::size_t>{0, 2, 4, 6}));
    EXPECT_FALSE(stabilized_merge(seq, {1}, 5).success);
    EXPECT_EQ(stabilized_merge(seq, {1}, 5).best_quota, 4U);
}

TEST(Merge, AgreesWithSubsetSearch) {
    RandomTriple R;
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<FiniteCandidate> seq;
        for (int i = 0; i < 16; ++i) seq.push_back(fuzz::random_candidate(rng, R, {}, 2));
        // largest subset whose members pairwise agree below level 1
        bool same[16][16];
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) same[i][j] = truncate_candidate(seq[i], 1) == truncate_candidate(seq[j], 1);
        std::size_t best = 0;
        for (std::uint32_t mask = 1; mask < (1U << 16); ++mask) {
            int first = -1;
            bool ok = true;
            std::size_t size = 0;
            for (int i = 0; i < 16 && ok; ++i) {
                if (!((mask >> i) & 1U)) continue;
                ++size;
                if (first < 0) first = i;
                else ok = same[i][first];
            }
            if (ok) best = std::max(best, size);
        }
        MergeResult m = stabilized_merge(seq, {1}, 3);
        EXPECT_EQ(m.best_quota, best);
        EXPECT_EQ(m.success, best >= 3);
        if (m.success) {
            EXPECT_GE(m.indices.size(), 3U);
            for (std::size_t i : m.indices) EXPECT_EQ(truncate_candidate(seq[i], 1), m.prefixes[0]);
        }
    }
}
