#include "creature_lab/fuzz/fuzz.hpp"

#include <algorithm>

#include "creature_lab/measure.hpp"
#include "creature_lab/niceness.hpp"

namespace creature_lab::fuzz {

StarProfile fuzz_profile(unsigned levels) { return uniform_toy_profile(levels, 4, 2, 1); }

FiniteCandidate prune(const FiniteCandidate& s) {
    FiniteCandidate out = FiniteCandidate::from_creatures(s.family, s.root, s.height, s.creatures);
    for (auto it = out.creatures.begin(); it != out.creatures.end();) {
        if (!out.contains(it->first) || it->first.size() >= out.height) it = out.creatures.erase(it);
        else ++it;
    }
    return out;
}

Creature random_star_creature(Rng& rng, const StarTriple& triple, unsigned k, const Node& eta,
                              std::size_t max_letters) {
    const StarProfile& profile = triple.profile();
    const unsigned N = profile.n_at(k);
    const unsigned norm = static_cast<unsigned>(rng.below(k + 1));
    const std::uint64_t cap = std::min<std::uint64_t>({profile.cap_at(k, k - norm), 2, N - 1});
    const std::size_t g_size = static_cast<std::size_t>(rng.below(cap + 1));
    PartialMap g;
    while (g.size() < g_size) {
        const unsigned i = static_cast<unsigned>(rng.below(N));
        if (!g.defines(i)) g = g.with(i, rng.coin());
    }
    std::vector<Letter> pool = compatible_letters(g, N);
    const std::size_t want = 1 + static_cast<std::size_t>(rng.below(std::min(max_letters, pool.size())));
    std::vector<Letter> letters;
    while (letters.size() < want) {
        const std::size_t i = static_cast<std::size_t>(rng.below(pool.size()));
        letters.push_back(pool[i]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return make_star_creature(k, eta, norm, g, std::move(letters));
}

namespace {

Creature random_random_creature(Rng& rng, const Node& eta) {
    switch (rng.below(4)) {
        case 0: return creature_r(eta, {0});
        case 1: return creature_r(eta, {1});
        default: return creature_r(eta, {0, 1});
    }
}

}  // namespace

FiniteCandidate random_candidate(Rng& rng, const MeasuredTriple& triple, Node root, unsigned height,
                                 std::size_t max_letters) {
    std::map<Node, Creature> creatures;
    std::vector<Node> frontier{root};
    for (std::size_t level = root.size(); level < height; ++level) {
        std::vector<Node> next;
        for (const Node& eta : frontier) {
            Creature t = triple.family() == Family::random
                             ? random_random_creature(rng, eta)
                             : random_star_creature(rng, dynamic_cast<const StarTriple&>(triple),
                                                    static_cast<unsigned>(level), eta, max_letters);
            for (const Node& nu : t.pos()) next.push_back(nu);
            creatures.emplace(eta, std::move(t));
        }
        frontier = std::move(next);
    }
    return FiniteCandidate::from_creatures(triple.family(), std::move(root), height, std::move(creatures));
}

Valuation random_valuation(Rng& rng, const FiniteCandidate& s, std::uint64_t den) {
    Valuation f;
    for (const Node& nu : s.boundary()) f[nu] = rng.unit(den);
    return f;
}

namespace {

Valuation restrict_to_boundary(const FiniteCandidate& s, const Valuation& f, const Rational& fill) {
    Valuation out;
    for (const Node& nu : s.boundary()) {
        const auto it = f.find(nu);
        out[nu] = it == f.end() ? fill : it->second;
    }
    return out;
}

// New boundary nodes (after truncation) get `fill`.
Instance refit(const Instance& inst, FiniteCandidate s, const Rational& fill = 0) {
    Instance out = inst;
    out.s = std::move(s);
    out.f = restrict_to_boundary(out.s, inst.f, fill);
    out.f2 = restrict_to_boundary(out.s, inst.f2, fill);
    out.m = std::clamp(inst.m, out.s.root_level(), out.s.height);
    out.m2 = std::clamp(inst.m2, out.m, out.s.height);
    return out;
}

bool still_fails(const MeasuredTriple& triple, const Instance& inst, const Property& holds) {
    try {
        if (!validate_candidate(triple, inst.s).ok()) return false;
        return !holds(triple, inst);
    } catch (const LabError&) {
        return false;
    }
}

std::vector<Instance> mutations(const Instance& inst) {
    std::vector<Instance> out;
    const FiniteCandidate& s = inst.s;
    if (s.height > s.root_level()) {
        const FiniteCandidate shorter = prune(truncate_candidate(s, s.height - 1));
        out.push_back(refit(inst, shorter, 0));
        out.push_back(refit(inst, shorter, 1));
    }
    for (const auto& [eta, t] : s.creatures) {
        if (t.letters.size() < 2) continue;
        for (std::size_t i = 0; i < t.letters.size(); ++i) {
            FiniteCandidate c = s;
            c.creatures[eta].letters.erase(c.creatures[eta].letters.begin() + static_cast<std::ptrdiff_t>(i));
            c.tree.clear();
            out.push_back(refit(inst, prune(c)));
        }
    }
    for (Valuation Instance::*field : {&Instance::f, &Instance::f2}) {
        for (const auto& [nu, x] : inst.*field) {
            for (const Rational& simpler : {Rational(0), Rational(1), Rational(1, 2)}) {
                if (x == simpler) continue;
                Instance c = inst;
                (c.*field)[nu] = simpler;
                out.push_back(std::move(c));
            }
        }
    }
    for (const Rational& simpler : {Rational(0), Rational(1), Rational(1, 2)}) {
        if (inst.b == simpler) continue;
        Instance c = inst;
        c.b = simpler;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

Instance shrink(const MeasuredTriple& triple, Instance failing, const Property& holds, std::size_t max_rounds) {
    for (std::size_t round = 0; round < max_rounds; ++round) {
        bool progress = false;
        for (Instance& c : mutations(failing)) {
            if (still_fails(triple, c, holds)) {
                failing = std::move(c);
                progress = true;
                break;
            }
        }
        if (!progress) break;
    }
    return failing;
}

io::json instance_json(const MeasuredTriple& triple, const Instance& inst) {
    io::Codec codec;
    if (const auto* star = dynamic_cast<const StarTriple*>(&triple)) codec.profile = &star->profile();
    return {{"candidate", codec.candidate(inst.s)},
            {"f", codec.valuation(inst.s.family, inst.f)},
            {"f2", codec.valuation(inst.s.family, inst.f2)},
            {"b", io::rational(inst.b)},
            {"m", inst.m},
            {"m2", inst.m2}};
}

namespace {

bool pointwise_le(const MeasureMap& a, const MeasureMap& b) {
    for (const auto& [nu, x] : a) {
        const auto it = b.find(nu);
        if (it == b.end() || x > it->second) return false;
    }
    return true;
}

/// Bottom-up lowered assignment: boundary f * f2, internal nodes b times
/// the average of their successors.
MeasureMap lowered(const MeasuredTriple& triple, const Instance& inst) {
    MeasureMap mu;
    for (const Node& nu : inst.s.boundary()) mu[nu] = inst.f.at(nu) * inst.f2.at(nu);
    for (unsigned level = inst.s.height; level-- > inst.s.root_level();) {
        for (const Node& eta : inst.s.level(level)) {
            const Creature& t = inst.s.creatures.at(eta);
            Valuation r;
            for (const Node& nu : t.pos()) r[nu] = mu.at(nu);
            mu[eta] = inst.b * eval_F(triple, t, r);
        }
    }
    return mu;
}

bool prop_monotone(const MeasuredTriple& triple, const Instance& inst) {
    Valuation hi = inst.f;
    for (auto& [nu, x] : hi) x = std::min(Rational(1), Rational(x + inst.f2.at(nu)));
    return pointwise_le(mval(triple, inst.s, inst.f), mval(triple, inst.s, hi));
}

bool prop_scaling(const MeasuredTriple& triple, const Instance& inst) {
    Valuation scaled = inst.f;
    for (auto& [nu, x] : scaled) x *= inst.b;
    const MeasureMap a = mval(triple, inst.s, inst.f);
    const MeasureMap c = mval(triple, inst.s, scaled);
    for (const auto& [nu, x] : a) {
        if (c.at(nu) != inst.b * x) return false;
    }
    return true;
}

bool prop_fronts(const MeasuredTriple& triple, const Instance& inst) {
    return front_value(triple, inst.s, inst.m2) <= front_value(triple, inst.s, inst.m);
}

bool prop_semimeasure(const MeasuredTriple& triple, const Instance& inst) {
    const MeasureMap mu = mval(triple, inst.s, inst.f);
    if (check_semi_measure(triple, inst.s, mu).verdict != SemiVerdict::exact) return false;
    const MeasureMap low = lowered(triple, inst);
    const SemiMeasureReport rep = check_semi_measure(triple, inst.s, low);
    if (rep.verdict == SemiVerdict::neither) return false;
    bool lowered_somewhere = false;
    for (const auto& c : rep.internal) {
        if (inst.b < 1 && sgn(c.average) > 0) lowered_somewhere = true;
    }
    if (lowered_somewhere && rep.verdict != SemiVerdict::semi) return false;
    return pointwise_le(low, mu);
}

bool prop_oracle(const MeasuredTriple& triple, const Instance& inst) {
    const MeasureMap mu = mval(triple, inst.s, inst.f);
    return mu.at(inst.s.root) == dyadic_oracle(inst.s, inst.f) && mu == mval_reference(triple, inst.s, inst.f);
}

struct Fixture {
    RandomTriple random;
    StarTriple star;
    explicit Fixture(Guards g) : random(g), star(fuzz_profile(), g) {}
    const MeasuredTriple& pick(std::size_t i) const {
        return i % 2 == 0 ? static_cast<const MeasuredTriple&>(random) : star;
    }
};

Instance make_instance(Rng& rng, const MeasuredTriple& triple) {
    Instance inst;
    Node root;
    if (triple.family() == Family::random && rng.below(4) == 0) root.push_back(rng.below(2));
    const unsigned max_extra = triple.family() == Family::random ? 4 : 3;
    const unsigned height = static_cast<unsigned>(root.size() + 1 + rng.below(max_extra));
    inst.s = random_candidate(rng, triple, root, height);
    inst.f = random_valuation(rng, inst.s, 8);
    inst.f2 = random_valuation(rng, inst.s, 8);
    inst.b = rng.unit(8);
    const unsigned lo = inst.s.root_level();
    inst.m = lo + static_cast<unsigned>(rng.below(height - lo + 1));
    inst.m2 = inst.m + static_cast<unsigned>(rng.below(height - inst.m + 1));
    return inst;
}

SuiteResult run_candidate_suite(const std::string& name, std::uint64_t seed, std::size_t count, Guards guards,
                                const Property& prop, bool random_only) {
    SuiteResult out;
    out.suite = name;
    out.seed = seed;
    out.count = count;
    Fixture fx(guards);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const MeasuredTriple& triple = random_only ? fx.random : fx.pick(i);
        Instance inst = make_instance(rng, triple);
        ++out.checked;
        if (prop(triple, inst)) continue;
        ++out.failures;
        if (!out.counterexample) {
            const Instance small = shrink(triple, inst, prop);
            out.counterexample = instance_json(triple, small);
            (*out.counterexample)["index"] = i;
            (*out.counterexample)["family"] = std::string(family_name(triple.family()));
        }
    }
    return out;
}

Creature random_creature(Rng& rng, const Fixture& fx, bool star, unsigned max_level, std::size_t max_letters) {
    const unsigned k = (star ? 1 : 0) + static_cast<unsigned>(rng.below(max_level));
    Node eta;
    for (unsigned i = 0; i < k; ++i) eta.push_back(star ? rng.below(16) : rng.below(2));
    return star ? random_star_creature(rng, fx.star, k, eta, max_letters) : random_random_creature(rng, eta);
}

SuiteResult run_sigma_suite(std::uint64_t seed, std::size_t count, Guards guards) {
    SuiteResult out;
    out.suite = "sigma-transitivity";
    out.seed = seed;
    out.count = count;
    Fixture fx(guards);
    Rng rng(seed);
    io::Codec codec;
    codec.profile = &fx.star.profile();
    for (std::size_t i = 0; i < count; ++i) {
        const bool star = i % 2 == 1;
        const MeasuredTriple& triple = fx.pick(i);
        const Creature t = random_creature(rng, fx, star, 3, 4);
        const auto comps = triple.compositions(t);
        bool ok = triple.in_composition(t, t) && std::find(comps.begin(), comps.end(), t) != comps.end();
        const Creature s = comps.empty() ? t : comps[rng.below(comps.size())];
        const auto comps2 = triple.compositions(s);
        const Creature u = comps2.empty() ? s : comps2[rng.below(comps2.size())];
        ok = ok && triple.in_composition(s, t) && triple.in_composition(u, s) && triple.in_composition(u, t) &&
             std::find(comps.begin(), comps.end(), u) != comps.end();
        ++out.checked;
        if (ok) continue;
        ++out.failures;
        if (!out.counterexample) {
            out.counterexample = io::json{{"index", i}, {"t", codec.creature(t)}, {"s", codec.creature(s)},
                                          {"u", codec.creature(u)}};
        }
    }
    return out;
}

SuiteResult run_beta_suite(std::uint64_t seed, std::size_t count, Guards guards) {
    SuiteResult out;
    out.suite = "beta-random";
    out.seed = seed;
    out.count = count;
    Fixture fx(guards);
    Rng rng(seed);
    io::Codec codec;
    codec.profile = &fx.star.profile();
    for (std::size_t i = 0; i < count; ++i) {
        const bool star = i % 2 == 1;
        const MeasuredTriple& triple = fx.pick(i);
        const Creature t = random_creature(rng, fx, star, 4, 6);
        const std::size_t n = t.letters.size();
        std::vector<Rational> r(n), r0(n), r1(n);
        for (std::size_t j = 0; j < n; ++j) {
            r[j] = rng.unit(8);
            r0[j] = rng.unit(8);
            const Rational need = r[j] > r0[j] ? Rational(r[j] - r0[j]) : Rational(0);
            r1[j] = std::min(Rational(1), Rational(need + rng.unit(8) * (1 - need)));
        }
        // Random creatures are nice with drop 0; star creatures lose one unit of norm.
        const Rational theta = star ? fx.star.profile().beta_at(t.level) : double_exp_neg(t.level);
        const Rational drop = star ? 1 : 0;
        const SplitResult res = beta_split_aligned(triple, t, r, r0, r1, theta, drop);
        bool ok;
        if (star) {
            // Toy star profiles need not be nice: only the decision itself is checked.
            ++out.skipped;
            ok = res.feasible ? res.witness_verified : res.c0_at_least + res.c1_at_least < res.target;
        } else {
            ++out.checked;
            ok = res.feasible && res.witness_verified;
        }
        if (ok) continue;
        ++out.failures;
        if (!out.counterexample) {
            out.counterexample = io::json{{"index", i},
                                          {"t", codec.creature(t)},
                                          {"r", codec.letter_values(t, r)},
                                          {"r0", codec.letter_values(t, r0)},
                                          {"r1", codec.letter_values(t, r1)},
                                          {"theta", io::rational(theta)},
                                          {"drop", io::rational(drop)},
                                          {"diagnosis", res.diagnosis}};
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"monotone",     "scaling",           "fronts",     "semimeasure",
                                                "oracle-random", "sigma-transitivity", "beta-random"};
    return names;
}

SuiteResult run_suite(const std::string& suite, std::uint64_t seed, std::size_t count, Guards guards) {
    if (suite == "monotone") return run_candidate_suite(suite, seed, count, guards, prop_monotone, false);
    if (suite == "scaling") return run_candidate_suite(suite, seed, count, guards, prop_scaling, false);
    if (suite == "fronts") return run_candidate_suite(suite, seed, count, guards, prop_fronts, false);
    if (suite == "semimeasure") return run_candidate_suite(suite, seed, count, guards, prop_semimeasure, false);
    if (suite == "oracle-random") return run_candidate_suite(suite, seed, count, guards, prop_oracle, true);
    if (suite == "sigma-transitivity") return run_sigma_suite(seed, count, guards);
    if (suite == "beta-random") return run_beta_suite(seed, count, guards);
    throw InputError("unknown fuzz suite '" + suite + "'");
}

io::json report(const SuiteResult& r) {
    io::json out{{"version", io::schema_version},
                 {"suite", r.suite},
                 {"seed", r.seed},
                 {"count", r.count},
                 {"checked", r.checked},
                 {"skipped", r.skipped},
                 {"failures", r.failures},
                 {"verdict", r.passed() ? "pass" : "fail"}};
    if (r.counterexample) out["counterexample"] = *r.counterexample;
    return out;
}

}  // namespace creature_lab::fuzz
