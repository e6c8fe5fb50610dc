#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "creature_lab/rational.hpp"

namespace creature_lab {

/// Toy replacements for the constants of the star construction. Absent
/// entries fall back to the level-k formulas: beta -> 2^{-2^k},
/// stabilize -> 2^{-2^{k+3}}, gain -> 2^{-2^{2k+7}}.
struct StarThresholds {
    std::optional<Rational> beta;
    std::optional<Rational> stabilize;
    std::optional<Rational> stabilize_gain;
};

struct StarProfile {
    enum class Mode { toy, paper };

    Mode mode = Mode::toy;
    std::vector<unsigned> N;                         // toy: N_k per level
    std::vector<std::vector<std::uint64_t>> cap;     // cap[k][d]; missing d -> last entry
    std::vector<std::uint64_t> budget;               // budget[k]
    StarThresholds thresholds;

    // Paper mode only.
    std::vector<std::vector<BigInt>> phi;  // phi[k][i], i <= k+1
    std::vector<BigInt> N_exact;

    unsigned levels() const;
    unsigned n_at(unsigned k) const;
    std::uint64_t cap_at(unsigned k, unsigned d) const;
    std::uint64_t budget_at(unsigned k) const;

    Rational beta_at(unsigned k) const;
    Rational stabilize_at(unsigned k) const;
    Rational gain_at(unsigned k) const;

    /// Number of F* rows for |g| = g_size at level k:
    /// sum_{j <= budget} C(N - |g|, j) 2^j.
    BigInt row_count(unsigned k, std::size_t g_size) const;

    /// 2^{N_k} letters per level, as a big integer.
    BigInt alphabet_size(unsigned k) const;
};

/// Validated toy profile (N_k powers of two, at most 32, caps per level).
StarProfile toy_profile(std::vector<unsigned> N, std::vector<std::vector<std::uint64_t>> cap,
                        std::vector<std::uint64_t> budget, StarThresholds thresholds = {});

/// Uniform toy profile: `levels` levels with the same N, cap and budget.
StarProfile uniform_toy_profile(unsigned levels, unsigned N, std::uint64_t cap, std::uint64_t budget,
                                StarThresholds thresholds = {});

/// The exact phi_k and N_k for k <= k_max, using the certified increment
/// 2^{2^{k+3}} + 2^{2k+8+2^{2k+7}} + 1.
StarProfile paper_profile(unsigned k_max, unsigned k_limit = 8);

/// The certified increment of phi_k.
BigInt phi_increment(unsigned k);

}  // namespace creature_lab
