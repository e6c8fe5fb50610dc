#include "creature_lab/star/star_lemmas.hpp"

namespace creature_lab {

namespace {

unsigned natural_norm(const Creature& t) { return static_cast<unsigned>(t.norm.get_num().get_ui()); }

}  // namespace

StabilizeResult greedy_stabilize(const StarTriple& triple, const Creature& t, const PartialMap& g_prime,
                                 std::span<const Rational> r, std::optional<Rational> gain_opt) {
    triple.require_valid(t);
    const StarProfile& profile = triple.profile();
    const unsigned k = t.level;
    const unsigned N = profile.n_at(k);
    const std::uint64_t budget = profile.budget_at(k);
    if (r.size() != t.letters.size()) throw InputError("r does not match |pos(t)|");
    for (const auto& x : r) {
        if (!in_unit_interval(x)) throw InputError("r has a value outside [0,1]");
    }
    if (t.norm < 1) throw HypothesisError("stabilization needs nor[t] >= 1");
    if (!t.g.subset_of(g_prime)) throw HypothesisError("g' does not extend g_t");
    if (N < 64 && (g_prime.domain >> N) != 0) throw InputError("g' is defined outside N_k");
    if (g_prime.size() - t.g.size() > budget) throw HypothesisError("|g' \\ g_t| exceeds the budget");

    StabilizeCertificate cert;
    cert.gain = gain_opt ? *gain_opt : profile.gain_at(k);
    if (sgn(cert.gain) <= 0) throw InputError("gain must be positive");
    cert.threshold = profile.stabilize_at(k);
    cert.a = triple.normalized_sum(t, r, g_prime);
    cert.a_meets_threshold = cert.a >= cert.threshold;
    cert.chain.push_back(g_prime);
    cert.chain_sums.push_back(cert.a);

    const Rational factor = 1 + cert.gain;
    Rational next_target = cert.a * factor;
    std::size_t work = 0;
    if (sgn(cert.a) > 0) {
        while (true) {
            std::optional<PartialMap> best;
            Rational best_sum;
            for_each_extension(cert.chain.back(), N, budget, [&](const PartialMap& h) {
                check_guard(++work, triple.guards().max_search, "stabilization step");
                Rational v = triple.normalized_sum(t, r, h);
                if (!best || v > best_sum) {
                    best = h;
                    best_sum = std::move(v);
                }
                return true;
            });
            if (best_sum < next_target) break;
            cert.chain.push_back(*best);
            cert.chain_sums.push_back(best_sum);
            // Measured from the sum reached, so a step that adds nothing
            // (g_{l+1} = g_l) can never qualify.
            next_target = best_sum * factor;
        }
    }
    cert.steps = static_cast<unsigned>(cert.chain.size() - 1);
    const PartialMap g_s = cert.chain.back();
    const unsigned n_s = natural_norm(t) - 1;
    if (g_s.size() > profile.cap_at(k, k - n_s)) {
        throw HypothesisError("|g_s| = " + std::to_string(g_s.size()) + " exceeds cap(" + std::to_string(k) + "," +
                              std::to_string(k - n_s) + ") after " + std::to_string(cert.steps) + " steps");
    }
    std::vector<Letter> letters;
    std::vector<Rational> rs;
    for (std::size_t i = 0; i < t.letters.size(); ++i) {
        if (g_s.extended_by(t.letters[i])) {
            letters.push_back(t.letters[i]);
            rs.push_back(r[i]);
        }
    }
    if (letters.empty()) throw HypothesisError("no letter of P_t extends g_s");
    Creature s = make_star_creature(k, t.stem, n_s, g_s, std::move(letters));

    cert.final_sum = cert.chain_sums.back();
    cert.a_star = cert.final_sum;
    const Rational ceiling = cert.a_star * factor;
    cert.fixpoint_verified = true;
    if (sgn(cert.a) > 0) {
        for_each_extension(g_s, N, budget, [&](const PartialMap& h) {
            if (triple.normalized_sum(t, r, h) >= ceiling) cert.fixpoint_verified = false;
            return cert.fixpoint_verified;
        });
    }
    cert.step_bound_from_threshold =
        !cert.a_meets_threshold || cert.threshold * power(factor, cert.steps) <= 1;
    cert.step_bound_holds = cert.a * power(factor, cert.steps) <= cert.a_star && cert.a_star <= 1 &&
                            cert.step_bound_from_threshold;

    cert.delta = cert.gain * (power(Rational(2), budget) - 1);
    if (cert.delta < 1) cert.window = factor / (1 - cert.delta);
    const FunctionalSet F = triple.functionals(s);
    cert.rows_checked = F.row_count();
    for (std::size_t i = 0; i < F.row_count(); ++i) {
        Rational v = F.rows()[i].apply(rs);
        if (i == 0 || v < cert.row_min) cert.row_min = v;
        if (i == 0 || v > cert.row_max) cert.row_max = v;
    }
    cert.F_s = F.evaluate(rs);
    if (cert.window) {
        cert.beta_holds = cert.F_s >= cert.a_star * (1 - cert.delta) && cert.F_s >= cert.a * (1 - cert.delta);
        cert.gamma_holds = cert.row_min >= cert.F_s && cert.row_max <= cert.F_s * *cert.window;
    } else {
        // delta >= 1: both conclusions are vacuous.
        cert.beta_holds = true;
        cert.gamma_holds = cert.row_min >= cert.F_s;
    }
    return StabilizeResult{std::move(s), std::move(cert)};
}

StarSplitResult split_star(const StarTriple& triple, const Creature& t, std::span<const Rational> r,
                           std::span<const Rational> r0, std::span<const Rational> r1) {
    triple.require_valid(t);
    const std::size_t n = t.letters.size();
    if (r.size() != n || r0.size() != n || r1.size() != n) throw InputError("valuations do not match |pos(t)|");
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_unit_interval(r[i]) || !in_unit_interval(r0[i]) || !in_unit_interval(r1[i])) {
            throw InputError("valuation value outside [0,1]");
        }
        if (r0[i] + r1[i] < r[i]) throw InputError("r0 + r1 >= r fails");
    }
    const StarProfile& profile = triple.profile();
    StarSplitResult out;
    out.theta = profile.beta_at(t.level);
    out.small = profile.stabilize_at(t.level);
    out.F_t = triple.functionals(t).evaluate(r);
    out.hypotheses_hold = t.norm > 1 && out.F_t >= out.theta;
    out.a0 = triple.normalized_sum(t, r0, t.g);
    out.a1 = triple.normalized_sum(t, r1, t.g);
    const Rational target = (1 - out.theta) * out.F_t;

    const bool large[2] = {out.a0 >= out.small, out.a1 >= out.small};
    if (!large[0] && !large[1]) {
        out.diagnosis = "both normalized sums are below the stabilization threshold";
        if (sgn(target) > 0) return out;
    }
    out.route = large[0] && large[1] ? "both" : large[0] ? "side0" : large[1] ? "side1" : "none";

    std::optional<Creature> s[2];
    Rational c[2] = {0, 0};
    const std::span<const Rational> rl[2] = {r0, r1};
    for (int l = 0; l < 2; ++l) {
        if (!large[l]) continue;
        try {
            StabilizeResult res = greedy_stabilize(triple, t, t.g, rl[l]);
            // Letters with r^l = 0 contribute nothing; drop them from P.
            Creature shrunk = res.s;
            std::vector<Letter> keep;
            std::vector<Rational> values;
            for (Letter f : shrunk.letters) {
                const std::size_t i = t.index_of(f);
                if (sgn(rl[l][i]) > 0) {
                    keep.push_back(f);
                    values.push_back(rl[l][i]);
                }
            }
            if (keep.empty()) {
                out.diagnosis = "stabilized creature on side " + std::to_string(l) + " misses supp(r^l)";
                return out;
            }
            shrunk.letters = std::move(keep);
            c[l] = triple.functionals(shrunk).evaluate(values);
            s[l] = std::move(shrunk);
            out.certificates.push_back(std::move(res.certificate));
        } catch (const HypothesisError& e) {
            out.diagnosis = std::string("stabilization on side ") + std::to_string(l) + " failed: " + e.what();
            return out;
        }
    }
    if (c[0] + c[1] < target) {
        out.diagnosis = "c0 + c1 = " + to_string(c[0] + c[1]) + " falls short of the target " + to_string(target);
        return out;
    }
    // Lower proportionally to reach c0 + c1 = target exactly.
    SplitWitness w;
    w.target = target;
    const Rational total = c[0] + c[1];
    w.c0 = sgn(total) > 0 ? Rational(c[0] * target / total) : Rational(0);
    w.c1 = target - w.c0;
    if (sgn(w.c0) > 0) w.s0 = s[0];
    if (sgn(w.c1) > 0) w.s1 = s[1];
    std::string why;
    out.verified = verify_split_witness(triple, t, r0, r1, w, 1, &why);
    if (!out.verified) {
        out.diagnosis = "witness failed re-verification: " + why;
        return out;
    }
    out.diagnosis.clear();
    out.witness = std::move(w);
    return out;
}

TransferReport transfer_bound(const StarTriple& triple, const TransferInstance& inst, TransferMode mode,
                              const Rational& drop) {
    const Creature& t = inst.t;
    triple.require_valid(t);
    const std::size_t n = t.letters.size();
    const unsigned k = t.level;
    const unsigned N = triple.profile().n_at(k);
    const std::size_t Y = mode == TransferMode::plain ? inst.y_count : inst.y_count * N;
    if (Y == 0) throw InputError("Y must be nonempty");
    if (inst.r.size() != n || inst.u.size() != n) throw InputError("r and u must be indexed by pos(t)");
    if (!in_unit_interval(inst.gamma)) throw InputError("gamma outside [0,1]");
    for (std::size_t i = 0; i < n; ++i) {
        if (inst.u[i].size() != Y) throw InputError("u_nu must have one value per element of Y");
        if (!in_unit_interval(inst.r[i])) throw InputError("r outside [0,1]");
        for (const auto& x : inst.u[i]) {
            if (!in_unit_interval(x)) throw InputError("u outside [0,1]");
        }
    }

    TransferReport rep;
    rep.a = triple.functionals(t).evaluate(inst.r);
    rep.lhs = inst.gamma * rep.a * (1 - double_exp_neg(k));
    rep.norm_above_one = t.norm > 1;
    rep.hypothesis_ii = inst.gamma * rep.a >= pow2(-6L * (1L << k));
    for (std::size_t i = 0; i < n; ++i) {
        Rational total = 0;
        for (const auto& x : inst.u[i]) total += x;
        if (inst.gamma * inst.r[i] * static_cast<unsigned long>(Y) > total) rep.failing_iv.push_back(i);
    }
    rep.hypothesis_iv = rep.failing_iv.empty();

    const Rational min_norm = t.norm - drop;
    auto column = [&](std::size_t y) {
        std::vector<Rational> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = inst.u[i][y];
        return col;
    };
    Rational total = 0;
    for (std::size_t y = 0; y < Y; ++y) {
        const auto col = column(y);
        if (mode == TransferMode::plain) {
            const auto best = triple.best_composition(t, col, min_norm, std::vector<bool>(n, true));
            rep.u_max.push_back(best ? best->value : Rational(0));
            total += rep.u_max.back();
        } else {
            const unsigned y1 = static_cast<unsigned>(y % N);
            for (unsigned l = 0; l < 2; ++l) {
                std::vector<bool> allowed(n);
                for (std::size_t i = 0; i < n; ++i) allowed[i] = ((t.letters[i] >> y1) & 1U) == l;
                const auto best = triple.best_composition(t, col, min_norm, allowed);
                rep.u_max.push_back(best ? best->value : Rational(0));
                total += rep.u_max.back();
            }
        }
    }
    rep.rhs = total / Rational(static_cast<unsigned long>(mode == TransferMode::plain ? Y : 2 * Y));
    rep.inequality_holds = rep.lhs <= rep.rhs;
    return rep;
}

}  // namespace creature_lab
