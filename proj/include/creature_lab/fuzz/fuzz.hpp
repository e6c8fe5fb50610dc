#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "creature_lab/io/json_io.hpp"
#include "creature_lab/random/random_triple.hpp"
#include "creature_lab/rng.hpp"
#include "creature_lab/star/star_triple.hpp"

namespace creature_lab::fuzz {

/// The toy star profile used by the randomized suites: N = 4 at every
/// level, cap 2, budget 1.
StarProfile fuzz_profile(unsigned levels = 5);

/// Drops creatures outside the tree grown from the root.
FiniteCandidate prune(const FiniteCandidate& s);

/// A random valid candidate. Star creatures get at most `max_letters`
/// letters so trees stay small; random creatures split with probability 1/2.
FiniteCandidate random_candidate(Rng& rng, const MeasuredTriple& triple, Node root, unsigned height,
                                 std::size_t max_letters = 3);

/// A random star creature at (k, eta) that satisfies the profile.
Creature random_star_creature(Rng& rng, const StarTriple& triple, unsigned k, const Node& eta,
                              std::size_t max_letters);

/// Values i/den on the boundary.
Valuation random_valuation(Rng& rng, const FiniteCandidate& s, std::uint64_t den);

/// Everything a candidate-based property can look at.
struct Instance {
    FiniteCandidate s;
    Valuation f;
    Valuation f2;
    Rational b;
    unsigned m = 0;
    unsigned m2 = 0;
};

using Property = std::function<bool(const MeasuredTriple&, const Instance&)>;

/// Greedy shrinking: prune letters, lower the height, and simplify values
/// while the property keeps failing. Deterministic.
Instance shrink(const MeasuredTriple& triple, Instance failing, const Property& holds, std::size_t max_rounds = 200);

io::json instance_json(const MeasuredTriple& triple, const Instance& inst);

struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::size_t checked = 0;   // instances where the property applied
    std::size_t skipped = 0;   // only self-consistency checked (niceness not asserted)
    std::size_t failures = 0;
    std::optional<io::json> counterexample;

    bool passed() const { return failures == 0; }
};

const std::vector<std::string>& suite_names();

/// Throws InputError on an unknown suite.
SuiteResult run_suite(const std::string& suite, std::uint64_t seed, std::size_t count, Guards guards = Guards{});

io::json report(const SuiteResult& r);

}  // namespace creature_lab::fuzz
