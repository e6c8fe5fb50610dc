#include "creature_lab/star/star_profile.hpp"

#include <string>

#include "creature_lab/errors.hpp"

namespace creature_lab {

namespace {

constexpr unsigned kMaxToyN = 32;

BigInt big_pow2(unsigned long exponent) {
    BigInt out = 1;
    mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), exponent);
    return out;
}

BigInt binomial(unsigned long n, unsigned long k) {
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

}  // namespace

unsigned StarProfile::levels() const {
    return static_cast<unsigned>(mode == Mode::toy ? N.size() : N_exact.size());
}

unsigned StarProfile::n_at(unsigned k) const {
    if (mode == Mode::paper) {
        throw GuardError("N_" + std::to_string(k) +
                         " of the exact profile exceeds 2^136; its 2^{N_k} letters cannot be materialized");
    }
    if (k >= N.size()) throw InputError("level " + std::to_string(k) + " is outside the profile");
    return N[k];
}

std::uint64_t StarProfile::cap_at(unsigned k, unsigned d) const {
    if (mode == Mode::paper) {
        if (k >= phi.size() || d >= phi[k].size()) throw InputError("phi index outside the profile");
        // Every entry dwarfs N_k's materializable range; saturate.
        return phi[k][d].fits_ulong_p() ? phi[k][d].get_ui() : UINT64_MAX;
    }
    if (k >= cap.size() || cap[k].empty()) throw InputError("cap table has no row for level " + std::to_string(k));
    const auto& row = cap[k];
    return d < row.size() ? row[d] : row.back();
}

std::uint64_t StarProfile::budget_at(unsigned k) const {
    if (mode == Mode::paper) return 1ULL << (k + 3);
    if (k >= budget.size()) throw InputError("budget missing for level " + std::to_string(k));
    return budget[k];
}

Rational StarProfile::beta_at(unsigned k) const {
    return thresholds.beta ? *thresholds.beta : double_exp_neg(k);
}

Rational StarProfile::stabilize_at(unsigned k) const {
    return thresholds.stabilize ? *thresholds.stabilize : double_exp_neg(k + 3);
}

Rational StarProfile::gain_at(unsigned k) const {
    return thresholds.stabilize_gain ? *thresholds.stabilize_gain : double_exp_neg(2 * k + 7);
}

BigInt StarProfile::row_count(unsigned k, std::size_t g_size) const {
    const unsigned n = n_at(k);
    const std::uint64_t b = budget_at(k);
    const std::size_t free = n > g_size ? n - g_size : 0;
    BigInt total = 0;
    for (std::uint64_t j = 0; j <= b && j <= free; ++j) total += binomial(free, j) * big_pow2(j);
    return total;
}

BigInt StarProfile::alphabet_size(unsigned k) const {
    if (mode == Mode::paper) {
        if (k >= N_exact.size()) throw InputError("level outside the profile");
        if (!N_exact[k].fits_ulong_p()) throw GuardError("2^{N_k} is too large to write down");
        return big_pow2(N_exact[k].get_ui());
    }
    return big_pow2(n_at(k));
}

StarProfile toy_profile(std::vector<unsigned> N, std::vector<std::vector<std::uint64_t>> cap,
                        std::vector<std::uint64_t> budget, StarThresholds thresholds) {
    if (N.empty()) throw InputError("toy profile needs at least one level");
    for (std::size_t k = 0; k < N.size(); ++k) {
        if (N[k] == 0 || (N[k] & (N[k] - 1)) != 0) {
            throw InputError("N_" + std::to_string(k) + " = " + std::to_string(N[k]) + " is not a power of two");
        }
        if (N[k] > kMaxToyN) throw GuardError("toy N_" + std::to_string(k) + " above " + std::to_string(kMaxToyN));
    }
    if (cap.size() < N.size()) throw InputError("cap table must have one row per level");
    for (const auto& row : cap) {
        if (row.empty()) throw InputError("cap rows must be nonempty");
    }
    if (budget.size() < N.size()) throw InputError("budget must have one entry per level");
    auto check_unit = [](const std::optional<Rational>& x, const char* what) {
        if (x && (sgn(*x) < 0 || *x > 1)) throw InputError(std::string(what) + " threshold outside [0,1]");
    };
    check_unit(thresholds.beta, "beta");
    check_unit(thresholds.stabilize, "stabilize");
    if (thresholds.stabilize_gain && sgn(*thresholds.stabilize_gain) <= 0) {
        throw InputError("stabilize_gain must be positive");
    }
    StarProfile p;
    p.mode = StarProfile::Mode::toy;
    p.N = std::move(N);
    p.cap = std::move(cap);
    p.budget = std::move(budget);
    p.thresholds = std::move(thresholds);
    return p;
}

StarProfile uniform_toy_profile(unsigned levels, unsigned N, std::uint64_t cap, std::uint64_t budget,
                                StarThresholds thresholds) {
    return toy_profile(std::vector<unsigned>(levels, N), std::vector<std::vector<std::uint64_t>>(levels, {cap}),
                       std::vector<std::uint64_t>(levels, budget), std::move(thresholds));
}

BigInt phi_increment(unsigned k) {
    // 2^{2k+7} / log2(1 + 2^{-2^{2k+7}}) <= 2^{2k+8+2^{2k+7}} since
    // log2(1+x) >= x/2 on (0,1].
    const unsigned long e = 1UL << (2 * k + 7);
    return big_pow2(1UL << (k + 3)) + big_pow2(2 * k + 8 + e) + 1;
}

StarProfile paper_profile(unsigned k_max, unsigned k_limit) {
    if (k_max > k_limit) {
        throw GuardError("paper profile up to k=" + std::to_string(k_max) + " exceeds the limit k<=" +
                         std::to_string(k_limit) + " (phi_k has about 2^{2k+7} bits)");
    }
    StarProfile p;
    p.mode = StarProfile::Mode::paper;
    for (unsigned k = 0; k <= k_max; ++k) {
        std::vector<BigInt> row;
        row.push_back(big_pow2(k + 4));
        const BigInt inc = phi_increment(k);
        for (unsigned i = 0; i <= k; ++i) row.push_back(row.back() + inc);
        p.N_exact.push_back(big_pow2(bit_length(row.back())));
        p.phi.push_back(std::move(row));
        p.budget.push_back(1ULL << (k + 3));
    }
    return p;
}

}  // namespace creature_lab
