#pragma once

#include <optional>
#include <string>
#include <vector>

#include "creature_lab/niceness.hpp"
#include "creature_lab/star/star_triple.hpp"

namespace creature_lab {

struct StabilizeCertificate {
    Rational a;                      // normalized sum at g'
    Rational threshold;              // toy analogue of 2^{-2^{k+3}}
    bool a_meets_threshold = false;
    Rational gain;                   // toy analogue of 2^{-2^{2k+7}}
    unsigned steps = 0;              // l0
    std::vector<PartialMap> chain;   // g_0 = g', ..., g_{l0}
    std::vector<Rational> chain_sums;
    Rational a_star;                 // sum reached at g_s, >= a (1+gain)^{l0}
    Rational final_sum;              // normalized sum at g_s
    bool fixpoint_verified = false;  // no extension reaches a* (1+gain)
    // Step bound: a (1+gain)^{l0} <= 1 always; threshold (1+gain)^{l0} <= 1
    // whenever a meets the threshold.
    bool step_bound_holds = false;
    bool step_bound_from_threshold = false;
    Rational delta;                  // gain (2^budget - 1)
    std::optional<Rational> window;  // (1+gain)/(1-delta), when delta < 1
    Rational F_s;
    Rational row_min;
    Rational row_max;
    std::size_t rows_checked = 0;
    bool beta_holds = false;         // F_s >= a (1 - delta)
    bool gamma_holds = false;        // every row value in [F_s, F_s * window]

    bool verified() const { return fixpoint_verified && step_bound_holds && beta_holds && gamma_holds; }
};

struct StabilizeResult {
    Creature s;
    StabilizeCertificate certificate;
};

/// Greedy stabilization: from g' extend g while some extension by at most
/// budget(k) new coordinates lifts the normalized sum to a (1+gain)^{l+1};
/// at the fixpoint g_s, n_s = n_t - 1 and P_s = {f in P_t : g_s ⊆ f}.
/// Throws HypothesisError when nor[t] < 1, |g' \ g_t| > budget, or the cap
/// for n_s is exceeded.
StabilizeResult greedy_stabilize(const StarTriple& triple, const Creature& t, const PartialMap& g_prime,
                                 std::span<const Rational> r, std::optional<Rational> gain = std::nullopt);

struct StarSplitResult {
    std::optional<SplitWitness> witness;
    Rational F_t;
    Rational theta;       // beta threshold of the level
    Rational a0;
    Rational a1;
    Rational small;       // stabilize threshold of the level
    std::string route;    // "both", "side0", "side1"
    std::vector<StabilizeCertificate> certificates;
    bool hypotheses_hold = false;  // nor[t] > 1 and F_t(r) >= theta
    bool verified = false;
    std::string diagnosis;
};

/// The case analysis of the splitting argument for star creatures: both
/// normalized sums large gives two stabilizations, one small side gives a
/// single stabilization on the other side. The witness is lowered to the
/// equality form and re-validated.
StarSplitResult split_star(const StarTriple& triple, const Creature& t, std::span<const Rational> r,
                           std::span<const Rational> r0, std::span<const Rational> r1);

/// Averaging-transfer instance: u[nu][y] with nu indexing t.letters.
/// In bit-split mode y enumerates Y* x N_k as y0 * N_k + y1.
struct TransferInstance {
    Creature t;
    Rational gamma;
    std::size_t y_count = 0;  // |Y| (plain) or |Y*| (bit-split)
    std::vector<Rational> r;
    std::vector<std::vector<Rational>> u;
};

enum class TransferMode { plain, bit_split };

struct TransferReport {
    Rational a;
    Rational lhs;                   // gamma a (1 - 2^{-2^k})
    Rational rhs;                   // the average of the maxima
    std::vector<Rational> u_max;    // u(y) or u(y, l) in y-major order
    std::vector<std::size_t> failing_iv;  // nu violating hypothesis (iv)
    bool hypothesis_iv = false;
    bool hypothesis_ii = false;     // gamma a >= 2^{-6 2^k}
    bool norm_above_one = false;
    bool inequality_holds = false;
};

TransferReport transfer_bound(const StarTriple& triple, const TransferInstance& inst, TransferMode mode,
                              const Rational& drop);

}  // namespace creature_lab
