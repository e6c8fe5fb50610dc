#include <gtest/gtest.h>

#include "creature_lab/measure.hpp"
#include "creature_lab/star/star_lemmas.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace creature_lab;
using namespace testing_helpers;

namespace {

// Random valid star creatures at a level with a profile whose cap is wide.
std::vector<Creature> sample_creatures(const StarTriple& S, unsigned k, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Creature> out;
    const unsigned N = S.profile().n_at(k);
    while (out.size() < count) {
        const unsigned norm = static_cast<unsigned>(rng.below(k + 1));
        PartialMap g;
        const std::uint64_t gs = rng.below(std::min<std::uint64_t>(S.profile().cap_at(k, k - norm), N - 1) + 1);
        while (g.size() < gs) {
            const unsigned i = static_cast<unsigned>(rng.below(N));
            if (!g.defines(i)) g = g.with(i, rng.coin());
        }
        std::vector<Letter> P;
        for (Letter f : compatible_letters(g, N)) {
            if (rng.below(3) != 0) P.push_back(f);
        }
        if (P.empty()) continue;
        Node eta(k, 0);
        out.push_back(make_star_creature(k, eta, norm, g, P));
    }
    return out;
}

std::vector<Rational> random_r(Rng& rng, std::size_t n, std::uint64_t den) {
    std::vector<Rational> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back(rng.unit(den));
    return r;
}

}  // namespace

TEST(StarProfileTest, Toy) {
    EXPECT_NO_THROW(toy_profile({4}, {{4}}, {1}));
    EXPECT_THROW(toy_profile({3}, {{4}}, {1}), InputError);
    StarProfile p = toy_profile({4, 8}, {{4}, {4}}, {1, 2});
    EXPECT_EQ(p.levels(), 2U);
    for (std::size_t g = 0; g <= 4; ++g) {
        BigInt expect = 0;
        const std::size_t free = 4 - g;
        expect += 1;
        expect += BigInt(static_cast<unsigned long>(free)) * 2;
        EXPECT_EQ(p.row_count(0, g), expect) << g;
    }
    EXPECT_EQ(p.row_count(1, 0), 1 + 8 * 2 + 28 * 4);
}

TEST(StarProfileTest, Paper) {
    StarProfile p = paper_profile(4);
    EXPECT_EQ(p.phi[0][0], 16);
    EXPECT_EQ(p.phi[1][0], 32);
    for (unsigned k = 0; k <= 4; ++k) {
        ASSERT_EQ(p.phi[k].size(), k + 2);
        EXPECT_EQ(p.phi[k][0], BigInt(1) << (k + 4));
        BigInt gap = BigInt(1) << (1U << (k + 3));
        for (unsigned i = 0; i + 1 < p.phi[k].size(); ++i) {
            EXPECT_GT(p.phi[k][i + 1] - p.phi[k][i], gap);
            EXPECT_EQ(p.phi[k][i + 1] - p.phi[k][i], phi_increment(k));
        }
        const BigInt& top = p.phi[k][k + 1];
        EXPECT_TRUE(is_power_of_two(p.N_exact[k]));
        EXPECT_GT(p.N_exact[k], top);
        EXPECT_LE(p.N_exact[k], 2 * top);
    }
    EXPECT_THROW(paper_profile(9), GuardError);
}

TEST(StarProfileTest, PaperCreaturesRefused) {
    StarTriple S(paper_profile(1));
    Creature t = make_star_creature(0, {}, 0, {}, {0});
    EXPECT_FALSE(S.violations(t).empty());
}

TEST(StarEnumerate, ClosedFormAtN2) {
    StarTriple S(uniform_toy_profile(1, 2, 2, 1));
    auto cs = enumerate_creatures(S, 0, {}, 0, 0);
    std::size_t expect = 0;
    for (auto [d, v] : oracle::all_partial_maps(2)) {
        unsigned ext = 1U << (2 - oracle::popcount(d));
        expect += (1U << ext) - 1;
        (void)v;
    }
    EXPECT_EQ(expect, 31U);
    EXPECT_EQ(cs.size(), expect);
    EXPECT_TRUE(enumerate_creatures(S, 0, {}, 1, 0).empty());

    StarTriple narrow(uniform_toy_profile(1, 2, 1, 1));
    for (const Creature& c : enumerate_creatures(narrow, 0, {}, 0, 0)) EXPECT_LE(c.g.size(), 1U);
    EXPECT_EQ(enumerate_creatures(narrow, 0, {}, 0, 0).size(), 15U + 12U);
}

TEST(StarSigma, MatchesDefinition) {
    StarTriple S(uniform_toy_profile(3, 4, 2, 1));
    for (const Creature& t : sample_creatures(S, 2, 25, 11)) {
        std::set<oracle::CreatureKey> got;
        for (const Creature& s : sigma_star(S, t)) got.insert(oracle::key(s));
        EXPECT_EQ(got, oracle::sigma_star(S.profile(), t)) << describe(t);
        EXPECT_TRUE(S.in_composition(t, t));
    }
}

TEST(StarSigma, TransitiveAtN2) {
    StarTriple S(uniform_toy_profile(2, 2, 2, 1));
    for (const Creature& t : enumerate_creatures(S, 1, {0}, 0, 1)) {
        auto st = sigma_star(S, t);
        std::set<oracle::CreatureKey> keys;
        for (const Creature& s : st) keys.insert(oracle::key(s));
        for (const Creature& s : st) {
            for (const Creature& u : sigma_star(S, s)) ASSERT_TRUE(keys.count(oracle::key(u)));
        }
    }
    // P may not shrink to letters incompatible with g
    Creature t = make_star_creature(1, {0}, 1, PartialMap{}.with(0, false), {0, 2});
    for (const Creature& s : sigma_star(S, t)) EXPECT_FALSE(s.letters.empty());
}

TEST(StarFunctionals, Examples) {
    StarTriple S(profile_n4_b1());
    Creature full = make_star_creature(0, {}, 0, {}, all_letters(4));
    FunctionalSet F = S.functionals(full);
    EXPECT_EQ(F.row_count(), 9U);
    for (std::size_t i = 0; i < F.row_count(); ++i) {
        Rational total = 0;
        for (const auto& x : F.dense_row(i)) total += x;
        EXPECT_EQ(total, 1);
    }
    EXPECT_EQ(F.evaluate(std::vector<Rational>(16, Rational(1))), 1);

    Creature half = make_star_creature(0, {}, 0, {}, even_letters(4));
    EXPECT_EQ(S.functionals(half).evaluate(std::vector<Rational>(8, Rational(1))), 0);
    EXPECT_EQ(S.functionals(half).row_count(), 9U);
}

TEST(StarFunctionals, AgreeWithBruteForce) {
    StarTriple S(uniform_toy_profile(3, 4, 3, 2));
    Rng rng(5);
    for (unsigned k = 0; k < 3; ++k) {
        for (const Creature& t : sample_creatures(S, k, 20, 100 + k)) {
            FunctionalSet F = S.functionals(t);
            EXPECT_EQ(F.row_count(), S.profile().row_count(k, t.g.size()));
            for (std::size_t i = 0; i < F.row_count(); ++i) {
                for (const auto& x : F.dense_row(i)) {
                    if (sgn(x) == 0) continue;
                    // a power of two no larger than 1
                    EXPECT_TRUE(x.get_num() == 1 && is_power_of_two(x.get_den()));
                }
            }
            for (int rep = 0; rep < 5; ++rep) {
                auto r = random_r(rng, t.letters.size(), 6);
                EXPECT_EQ(F.evaluate(r), oracle::fstar(S.profile(), t, r));
                EXPECT_EQ(F.evaluate_parallel(r), F.evaluate(r));
            }
        }
    }
}

TEST(StarFunctionals, BestCompositionMatchesGeneric) {
    StarTriple S(uniform_toy_profile(3, 4, 2, 1));
    Rng rng(9);
    for (const Creature& t : sample_creatures(S, 2, 15, 21)) {
        auto r = random_r(rng, t.letters.size(), 4);
        std::vector<bool> allowed(t.letters.size());
        for (std::size_t i = 0; i < allowed.size(); ++i) allowed[i] = rng.below(4) != 0;
        for (int drop = 0; drop <= 2; ++drop) {
            Rational min_norm = t.norm - drop;
            auto fast = S.best_composition(t, r, min_norm, allowed);
            auto slow = S.MeasuredTriple::best_composition(t, r, min_norm, allowed);
            ASSERT_EQ(fast.has_value(), slow.has_value());
            if (fast) {
                EXPECT_EQ(fast->value, slow->value);
                EXPECT_EQ(fast->creature, slow->creature);
            }
        }
    }
}

TEST(StarAuxiliary, Average) {
    StarTriple S(profile_n4_b1());
    Creature full = make_star_creature(0, {}, 0, {}, all_letters(4));
    EXPECT_EQ(auxiliary_average(S, full).evaluate(std::vector<Rational>(16, Rational(1))), 1);
    Creature half = make_star_creature(0, {}, 0, {}, even_letters(4));
    EXPECT_EQ(auxiliary_average(S, half).evaluate(std::vector<Rational>(8, Rational(1))), q("1/2"));
    EXPECT_EQ(auxiliary_average(S, half).row_count(), 1U);

    Rng rng(4);
    for (const Creature& t : sample_creatures(S, 2, 30, 44)) {
        auto r = random_r(rng, t.letters.size(), 8);
        const Rational hat = auxiliary_average(S, t).evaluate(r);
        EXPECT_LE(S.functionals(t).evaluate(r), hat);
        EXPECT_EQ(hat, oracle::normalized(4, t, r, t.g.domain, t.g.values));
    }
}

TEST(StarCover, Examples) {
    StarTriple S(uniform_toy_profile(3, 4, 2, 1));
    Creature full = make_star_creature(0, {}, 0, {}, all_letters(4));
    FiniteCandidate s = FiniteCandidate::from_creatures(Family::star, {}, 1, {{Node{}, full}});
    EXPECT_EQ(cover_star(S, s), s);

    PartialMap g = PartialMap{}.with(1, true);
    Creature pruned = make_star_creature(0, {}, 0, g, {2, 3});
    FiniteCandidate p = FiniteCandidate::from_creatures(Family::star, {}, 2,
                                                        {{Node{}, pruned},
                                                         {Node{2}, make_star_creature(1, {2}, 1, {}, {5})},
                                                         {Node{3}, make_star_creature(1, {3}, 0, {}, {1, 2, 3})}});
    FiniteCandidate c = cover_star(S, p);
    ASSERT_TRUE(validate_candidate(S, c).ok());
    EXPECT_EQ(c.creatures.at({}).letters.size(), 8U);
    EXPECT_EQ(c.creatures.at({}).g, g);
    EXPECT_EQ(c.creatures.at({2}).norm, 1);
    for (const auto& [eta, t] : c.creatures) {
        EXPECT_TRUE(is_power_of_two(BigInt(static_cast<unsigned long>(t.letters.size()))));
        EXPECT_EQ(t.letters.size(), 1U << (4 - t.g.size()));
    }
    EXPECT_TRUE(end_extends(truncate_candidate(c, 0), c));
}

TEST(GreedyStabilize, FullPFixpoint) {
    StarTriple S(profile_n4_b1());
    Creature t = make_star_creature(2, {0, 0}, 2, {}, all_letters(4));
    std::vector<Rational> ones(16, Rational(1));
    StabilizeResult res = greedy_stabilize(S, t, {}, ones, q("1/4"));
    EXPECT_EQ(res.certificate.steps, 0U);
    EXPECT_EQ(res.s.g, PartialMap{});
    EXPECT_EQ(res.s.norm, 1);
    EXPECT_EQ(S.functionals(res.s).evaluate(ones), 1);
    EXPECT_TRUE(res.certificate.verified());
}

TEST(GreedyStabilize, AddsTheMissingCoordinate) {
    StarTriple S(profile_n4_b1());
    Creature t = make_star_creature(1, {0}, 1, {}, even_letters(4));
    std::vector<Rational> ones(8, Rational(1));
    // independent row evaluation before
    EXPECT_EQ(oracle::fstar(4, 1, t, ones), 0);
    StabilizeResult res = greedy_stabilize(S, t, {}, ones, q("1/2"));
    const auto& c = res.certificate;
    EXPECT_EQ(c.a, q("1/2"));
    EXPECT_EQ(c.steps, 1U);
    EXPECT_EQ(res.s.g, PartialMap{}.with(0, false));
    EXPECT_EQ(c.chain_sums.back(), 1);
    EXPECT_EQ(res.s.letters, even_letters(4));
    EXPECT_EQ(res.s.norm, 0);
    EXPECT_EQ(S.functionals(res.s).evaluate(ones), 1);
    EXPECT_EQ(oracle::fstar(4, 1, res.s, ones), 1);
    EXPECT_TRUE(c.fixpoint_verified);
}

TEST(GreedyStabilize, ZeroValuation) {
    StarTriple S(profile_n4_b1());
    Creature t = make_star_creature(1, {0}, 1, {}, all_letters(4));
    StabilizeResult res = greedy_stabilize(S, t, {}, std::vector<Rational>(16), q("1/4"));
    EXPECT_EQ(res.certificate.steps, 0U);
    EXPECT_EQ(res.certificate.a, 0);
    EXPECT_FALSE(res.certificate.a_meets_threshold);
    EXPECT_TRUE(res.certificate.beta_holds);
    EXPECT_TRUE(res.certificate.gamma_holds);
}

TEST(GreedyStabilize, Hypotheses) {
    StarTriple S(uniform_toy_profile(3, 4, 1, 1));
    Creature t0 = make_star_creature(1, {0}, 0, {}, all_letters(4));
    EXPECT_THROW(greedy_stabilize(S, t0, {}, std::vector<Rational>(16, Rational(1))), HypothesisError);
    // cap(1, 1) = 1, so a g' of size 2 cannot survive the norm drop
    Creature t = make_star_creature(1, {0}, 1, PartialMap{}.with(0, false), even_letters(4));
    EXPECT_THROW(greedy_stabilize(S, t, PartialMap{}.with(0, false).with(1, false),
                                  std::vector<Rational>(8, Rational(1)), q("1/4")),
                 HypothesisError);
}

TEST(SplitStar, OneSided) {
    StarTriple S(profile_n4_b1());
    Creature t = make_star_creature(2, {0, 0}, 2, {}, all_letters(4));
    std::vector<Rational> ones(16, Rational(1)), zero(16);
    StarSplitResult res = split_star(S, t, ones, ones, zero);
    ASSERT_TRUE(res.witness) << res.diagnosis;
    EXPECT_TRUE(res.hypotheses_hold);
    EXPECT_EQ(res.witness->c0, 1 - double_exp_neg(2));
    EXPECT_EQ(res.witness->c1, 0);
    EXPECT_TRUE(res.witness->s0);
    EXPECT_TRUE(res.verified);
}

TEST(SplitStar, Symmetric) {
    StarTriple S(profile_n4_b1());
    Creature t = make_star_creature(2, {0, 0}, 2, {}, all_letters(4));
    std::vector<Rational> ones(16, Rational(1)), r0(16), r1(16);
    for (Letter f = 0; f < 16; ++f) ((f & 1U) ? r1 : r0)[f] = 1;
    StarSplitResult res = split_star(S, t, ones, r0, r1);
    ASSERT_TRUE(res.witness) << res.diagnosis;
    EXPECT_EQ(res.route, "both");
    EXPECT_EQ(res.witness->c0 + res.witness->c1, 1 - double_exp_neg(2));
    ASSERT_TRUE(res.witness->s0 && res.witness->s1);
    EXPECT_EQ(res.witness->s0->g, PartialMap{}.with(0, false));
    EXPECT_EQ(res.witness->s1->g, PartialMap{}.with(0, true));
    EXPECT_TRUE(verify_split_witness(S, t, r0, r1, *res.witness, 1));
}

TEST(SplitStar, ZeroIsDiagnosed) {
    StarTriple S(profile_n4_b1());
    Creature t = make_star_creature(2, {0, 0}, 2, {}, all_letters(4));
    std::vector<Rational> zero(16);
    StarSplitResult res = split_star(S, t, zero, zero, zero);
    EXPECT_FALSE(res.hypotheses_hold);
    EXPECT_TRUE(res.witness.has_value() || !res.diagnosis.empty());
    if (res.witness) {
        EXPECT_EQ(res.witness->c0, 0);
        EXPECT_EQ(res.witness->c1, 0);
    }
}

namespace {

// u(y) by brute force over Sigma*(t) and the F* definition.
Rational brute_u(const StarProfile& p, const Creature& t, const std::vector<Rational>& col, const Rational& min_norm,
                 const std::function<bool(Letter)>& allowed) {
    Rational best = 0;
    for (const auto& [norm, d, v, P] : oracle::sigma_star(p, t)) {
        if (norm < min_norm) continue;
        bool ok = true;
        for (Letter f : P) ok = ok && allowed(f);
        if (!ok) continue;
        Creature s = t;
        s.norm = norm;
        s.g = PartialMap{d, v};
        s.letters = P;
        std::vector<Rational> r;
        for (Letter f : P) r.push_back(col[t.index_of(f)]);
        best = std::max(best, oracle::fstar(p, s, r));
    }
    return best;
}

}  // namespace

TEST(Transfer, TrivialCases) {
    StarTriple S(profile_n4_b1());
    Creature t = make_star_creature(2, {0, 0}, 2, {}, even_letters(4));
    Rng rng(2);
    TransferInstance inst{t, 1, 3, random_r(rng, 8, 4), {}};
    for (const auto& x : inst.r) inst.u.push_back({x, x, x});
    TransferReport rep = transfer_bound(S, inst, TransferMode::plain, 1);
    for (const auto& u : rep.u_max) EXPECT_GE(u, rep.a);
    EXPECT_TRUE(rep.inequality_holds);
    EXPECT_TRUE(rep.hypothesis_iv);

    TransferInstance zero{t, 0, 2, std::vector<Rational>(8), std::vector<std::vector<Rational>>(8, {0, 0})};
    TransferReport z = transfer_bound(S, zero, TransferMode::plain, 1);
    EXPECT_EQ(z.lhs, 0);
    EXPECT_EQ(z.rhs, 0);
    EXPECT_TRUE(z.inequality_holds);
}

TEST(Transfer, AgreesWithBruteForce) {
    StarTriple S(uniform_toy_profile(3, 4, 2, 1));
    Rng rng(17);
    std::size_t compared = 0;
    for (const Creature& t : sample_creatures(S, 2, 12, 31)) {
        const std::size_t n = t.letters.size();
        for (TransferMode mode : {TransferMode::plain, TransferMode::bit_split}) {
            TransferInstance inst;
            inst.t = t;
            inst.gamma = q("7/8");
            inst.y_count = 2;
            const std::size_t Y = mode == TransferMode::plain ? 2 : 8;
            inst.r = random_r(rng, n, 4);
            inst.u.assign(n, std::vector<Rational>(Y));
            for (std::size_t i = 0; i < n; ++i) {
                // meet (iv): the mean of u_nu over Y is at least gamma r_nu
                for (std::size_t y = 0; y < Y; ++y) {
                    Rational x = std::min(Rational(1), Rational(inst.gamma * inst.r[i] + rng.unit(4) / 4));
                    inst.u[i][y] = x;
                }
            }
            TransferReport rep = transfer_bound(S, inst, mode, 1);
            EXPECT_TRUE(rep.hypothesis_iv);
            EXPECT_EQ(rep.a, oracle::fstar(S.profile(), t, inst.r));
            EXPECT_EQ(rep.lhs, inst.gamma * rep.a * (1 - q("1/16")));
            Rational total = 0;
            std::size_t j = 0;
            for (std::size_t y = 0; y < Y; ++y) {
                std::vector<Rational> col(n);
                for (std::size_t i = 0; i < n; ++i) col[i] = inst.u[i][y];
                if (mode == TransferMode::plain) {
                    Rational u = brute_u(S.profile(), t, col, t.norm - 1, [](Letter) { return true; });
                    EXPECT_EQ(rep.u_max[j++], u);
                    total += u;
                } else {
                    for (unsigned l = 0; l < 2; ++l) {
                        const unsigned y1 = static_cast<unsigned>(y % 4);
                        Rational u = brute_u(S.profile(), t, col, t.norm - 1,
                                             [&](Letter f) { return ((f >> y1) & 1U) == l; });
                        EXPECT_EQ(rep.u_max[j++], u);
                        total += u;
                    }
                }
            }
            EXPECT_EQ(rep.rhs, total / static_cast<unsigned long>(mode == TransferMode::plain ? Y : 2 * Y));
            EXPECT_EQ(rep.inequality_holds, rep.lhs <= rep.rhs);
            ++compared;
        }
    }
    EXPECT_EQ(compared, 24U);
}
