#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "creature_lab/rng.hpp"
#include "creature_lab/triple.hpp"

namespace creature_lab {

struct SplitWitness {
    std::optional<Creature> s0;
    std::optional<Creature> s1;
    Rational c0;
    Rational c1;
    Rational target;
};

struct SplitResult {
    bool feasible = false;
    Rational F_t;     // F_t(r)
    Rational target;  // (1 - theta) F_t(r)
    Rational theta;
    Rational drop;
    std::optional<Rational> M0;  // absent when no admissible composition exists
    std::optional<Rational> M1;
    /// Equality form: c0 + c1 = target (when feasible).
    SplitWitness witness;
    /// The unlowered pair (max(M0,0), max(M1,0)); feasible iff its sum >= target.
    Rational c0_at_least;
    Rational c1_at_least;
    bool norm_above_one = false;      // nor[t] > 1
    bool norm_above_drop = false;     // nor[t] > drop
    bool threshold_holds = false;     // F_t(r) >= 2^{-2^k}
    bool witness_verified = false;
    std::string diagnosis;
};

/// The two-maxima decision procedure for clause (beta) on aligned vectors
/// (indices follow t.letters).
SplitResult beta_split_aligned(const MeasuredTriple& triple, const Creature& t, std::span<const Rational> r,
                               std::span<const Rational> r0, std::span<const Rational> r1, const Rational& theta,
                               const Rational& drop);

/// Same on valuations over pos(t) (zero padded).
SplitResult beta_split(const MeasuredTriple& triple, const Creature& t, const Valuation& r, const Valuation& r0,
                       const Valuation& r1, const Rational& theta, const Rational& drop);

/// Re-evaluates every clause of a witness directly.
bool verify_split_witness(const MeasuredTriple& triple, const Creature& t, std::span<const Rational> r0,
                          std::span<const Rational> r1, const SplitWitness& w, const Rational& drop,
                          std::string* why = nullptr);

struct AxiomOptions {
    unsigned grid_denominator = 2;       // (beta) grid i/den
    std::size_t samples = 64;            // random spot checks for (alpha), (gamma)
    std::optional<Rational> theta;       // default 2^{-2^k}
    Rational drop = 1;
    std::uint64_t seed = 1;
};

struct AxiomReport {
    bool coefficients_nonnegative = false;  // gives (alpha), (gamma), (delta) structurally
    bool zero_law = false;
    bool alpha_spot = false;
    bool gamma_spot = false;
    std::size_t beta_cases = 0;
    std::size_t beta_feasible = 0;
    std::size_t beta_hypothesis_cases = 0;     // nor > 1 and F_t(r) >= 2^{-2^k}
    std::size_t beta_hypothesis_feasible = 0;
    bool beta_exhaustive = true;               // false when the grid was sampled
    std::optional<std::string> beta_counterexample;

    bool nice() const {
        return coefficients_nonnegative && zero_law && alpha_spot && gamma_spot &&
               beta_hypothesis_feasible == beta_hypothesis_cases;
    }
};

/// Decision procedures for the niceness axioms of one creature: structural
/// checks, exact spot checks, and clause (beta) over a rational grid
/// (exhaustive when it fits under the search guard, sampled otherwise).
AxiomReport check_axioms(const MeasuredTriple& triple, const Creature& t, const AxiomOptions& options);

}  // namespace creature_lab
