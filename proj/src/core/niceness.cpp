#include "creature_lab/niceness.hpp"

#include <algorithm>

namespace creature_lab {

namespace {

void check_unit_vector(std::span<const Rational> v, std::size_t n, const char* name) {
    if (v.size() != n) throw InputError(std::string(name) + " does not match |pos(t)|");
    for (const auto& x : v) {
        if (!in_unit_interval(x)) throw InputError(std::string(name) + " has a value outside [0,1]");
    }
}

std::vector<bool> support(std::span<const Rational> v) {
    std::vector<bool> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = sgn(v[i]) > 0;
    return out;
}

std::string vector_text(std::span<const Rational> v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += to_string(v[i]);
    }
    return out + ")";
}

}  // namespace

bool verify_split_witness(const MeasuredTriple& triple, const Creature& t, std::span<const Rational> r0,
                          std::span<const Rational> r1, const SplitWitness& w, const Rational& drop,
                          std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (w.c0 + w.c1 != w.target) return fail("c0 + c1 differs from the target");
    if (sgn(w.c0) < 0 || sgn(w.c1) < 0) return fail("negative c");
    const std::span<const Rational> rl[2] = {r0, r1};
    const Rational* cl[2] = {&w.c0, &w.c1};
    const std::optional<Creature>* sl[2] = {&w.s0, &w.s1};
    for (int l = 0; l < 2; ++l) {
        if (sgn(*cl[l]) <= 0) continue;
        const auto& s = *sl[l];
        const std::string side = "s" + std::to_string(l);
        if (!s) return fail(side + " missing although c" + std::to_string(l) + " > 0");
        if (!triple.in_composition(*s, t)) return fail(side + " is not in Sigma(t)");
        if (s->norm < t.norm - drop) return fail(side + " drops the norm too far");
        for (Letter f : s->letters) {
            const std::size_t i = t.index_of(f);
            if (i == Creature::npos || sgn(rl[l][i]) <= 0) return fail("pos(" + side + ") leaves supp(r^" + std::to_string(l) + ")");
        }
        const auto restricted = restrict_aligned(t, rl[l], *s);
        if (triple.functionals(*s).evaluate(restricted) < *cl[l]) return fail("F_" + side + "(r^l) < c_l");
    }
    return true;
}

SplitResult beta_split_aligned(const MeasuredTriple& triple, const Creature& t, std::span<const Rational> r,
                               std::span<const Rational> r0, std::span<const Rational> r1, const Rational& theta,
                               const Rational& drop) {
    const std::size_t n = t.letters.size();
    check_unit_vector(r, n, "r");
    check_unit_vector(r0, n, "r0");
    check_unit_vector(r1, n, "r1");
    if (!in_unit_interval(theta)) throw InputError("theta outside [0,1]");
    if (sgn(drop) < 0) throw InputError("drop must be nonnegative");
    for (std::size_t i = 0; i < n; ++i) {
        if (r0[i] + r1[i] < r[i]) throw InputError("r0 + r1 >= r fails at letter " + std::to_string(t.letters[i]));
    }

    SplitResult out;
    out.theta = theta;
    out.drop = drop;
    out.F_t = triple.functionals(t).evaluate(r);
    out.target = (1 - theta) * out.F_t;
    out.norm_above_one = t.norm > 1;
    out.norm_above_drop = t.norm > drop;
    out.threshold_holds = at_least_double_exp_neg(out.F_t, t.level);

    const Rational min_norm = t.norm - drop;
    const auto best0 = triple.best_composition(t, r0, min_norm, support(r0));
    const auto best1 = triple.best_composition(t, r1, min_norm, support(r1));
    if (best0) out.M0 = best0->value;
    if (best1) out.M1 = best1->value;
    out.c0_at_least = out.M0 && sgn(*out.M0) > 0 ? *out.M0 : Rational(0);
    out.c1_at_least = out.M1 && sgn(*out.M1) > 0 ? *out.M1 : Rational(0);
    out.feasible = sgn(out.target) == 0 || out.target <= out.c0_at_least + out.c1_at_least;
    out.witness.target = out.target;
    if (!out.feasible) {
        out.diagnosis = "max(M0,0) + max(M1,0) = " + to_string(out.c0_at_least + out.c1_at_least) +
                        " is below the target " + to_string(out.target);
        return out;
    }
    // Lower the >= pair to the equality form, filling side 1 first.
    out.witness.c1 = std::min(out.target, out.c1_at_least);
    out.witness.c0 = out.target - out.witness.c1;
    if (sgn(out.witness.c0) > 0) out.witness.s0 = best0->creature;
    if (sgn(out.witness.c1) > 0) out.witness.s1 = best1->creature;
    std::string why;
    out.witness_verified = verify_split_witness(triple, t, r0, r1, out.witness, drop, &why);
    if (!out.witness_verified) out.diagnosis = "witness failed re-verification: " + why;
    return out;
}

SplitResult beta_split(const MeasuredTriple& triple, const Creature& t, const Valuation& r, const Valuation& r0,
                       const Valuation& r1, const Rational& theta, const Rational& drop) {
    const auto a = align_valuation(t, r);
    const auto a0 = align_valuation(t, r0);
    const auto a1 = align_valuation(t, r1);
    return beta_split_aligned(triple, t, a, a0, a1, theta, drop);
}

AxiomReport check_axioms(const MeasuredTriple& triple, const Creature& t, const AxiomOptions& options) {
    triple.require_valid(t);
    if (options.grid_denominator == 0) throw InputError("grid denominator must be positive");
    AxiomReport report;
    const FunctionalSet F = triple.functionals(t);
    const std::size_t n = t.letters.size();
    report.coefficients_nonnegative = F.coefficients_nonnegative();
    report.zero_law = sgn(F.evaluate(std::vector<Rational>(n, Rational(0)))) == 0;

    Rng rng(options.seed);
    report.alpha_spot = true;
    report.gamma_spot = true;
    for (std::size_t trial = 0; trial < options.samples; ++trial) {
        std::vector<Rational> lo(n), hi(n);
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = rng.unit(8);
            hi[i] = lo[i] + (1 - lo[i]) * rng.unit(8);
        }
        if (F.evaluate(lo) > F.evaluate(hi)) report.alpha_spot = false;
        const Rational b = rng.unit(16);
        std::vector<Rational> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = b * lo[i];
        if (F.evaluate(scaled) != b * F.evaluate(lo)) report.gamma_spot = false;
    }

    const Rational theta = options.theta ? *options.theta : double_exp_neg(t.level);
    const unsigned den = options.grid_denominator;
    std::vector<Rational> grid;
    for (unsigned i = 0; i <= den; ++i) grid.push_back(Rational(i, den));
    for (auto& g : grid) g.canonicalize();

    auto run_case = [&](const std::vector<Rational>& r, const std::vector<Rational>& r0, const std::vector<Rational>& r1) {
        for (std::size_t i = 0; i < n; ++i) {
            if (r0[i] + r1[i] < r[i]) return;
        }
        const SplitResult res = beta_split_aligned(triple, t, r, r0, r1, theta, options.drop);
        ++report.beta_cases;
        const bool ok = res.feasible && res.witness_verified;
        if (ok) ++report.beta_feasible;
        if (res.norm_above_one && res.threshold_holds) {
            ++report.beta_hypothesis_cases;
            if (ok) ++report.beta_hypothesis_feasible;
            else if (!report.beta_counterexample) {
                report.beta_counterexample = "r=" + vector_text(r) + " r0=" + vector_text(r0) + " r1=" + vector_text(r1) +
                                             ": " + res.diagnosis;
            }
        }
    };

    // (den+1)^{3n} points; exhaustive only when it fits the search guard.
    const std::size_t digits = 3 * n;
    double total = 1;
    for (std::size_t i = 0; i < digits; ++i) total *= (den + 1);
    std::vector<Rational> r(n), r0(n), r1(n);
    if (total <= static_cast<double>(triple.guards().max_search)) {
        std::vector<unsigned> odo(digits, 0);
        while (true) {
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = grid[odo[i]];
                r0[i] = grid[odo[n + i]];
                r1[i] = grid[odo[2 * n + i]];
            }
            run_case(r, r0, r1);
            std::size_t d = 0;
            while (d < digits && ++odo[d] > den) odo[d++] = 0;
            if (d == digits) break;
        }
    } else {
        report.beta_exhaustive = false;
        const std::size_t draws = std::max<std::size_t>(options.samples * 16, 256);
        for (std::size_t trial = 0; trial < draws; ++trial) {
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = grid[rng.below(den + 1)];
                r0[i] = grid[rng.below(den + 1)];
                const Rational need = r[i] > r0[i] ? Rational(r[i] - r0[i]) : Rational(0);
                std::size_t lo = 0;
                while (grid[lo] < need) ++lo;
                r1[i] = grid[lo + rng.below(den + 1 - lo)];
            }
            run_case(r, r0, r1);
        }
    }
    return report;
}

}  // namespace creature_lab
