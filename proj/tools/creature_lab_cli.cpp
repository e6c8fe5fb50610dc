// creature-lab: command-line front end for the exact-arithmetic workbench.
// Exit codes: 0 ok, 1 negative verdict or failed hypothesis, 2 input error,
// 3 size guard.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "creature_lab/amalgamate.hpp"
#include "creature_lab/fuzz/fuzz.hpp"
#include "creature_lab/io/json_io.hpp"
#include "creature_lab/measure.hpp"
#include "creature_lab/niceness.hpp"
#include "creature_lab/random/random_triple.hpp"
#include "creature_lab/search.hpp"
#include "creature_lab/star/star_lemmas.hpp"
#include "creature_lab/templates/pretemplate.hpp"

namespace cl = creature_lab;
using cl::io::json;

namespace {

struct Options {
    std::string format = "json";
    std::uint64_t seed = 1;
    std::size_t count = 100;
    std::optional<std::size_t> max_pos;
    std::optional<std::size_t> max_rows;
    std::optional<std::string> drop;
    std::optional<std::string> theta;
    std::optional<std::string> gain;
    std::optional<std::string> schedule;
    std::optional<std::string> epsilon;
    std::string profile_path;
    bool timing = false;

    // verb inputs
    std::string creature, candidate, valuation, r, r0, r1, input, instance, templ, other, named, cover;
    std::string g_prime;
    std::string suite;
    std::string route = "optimal";
    std::optional<std::string> restrict_to;
    unsigned grid = 2;
    std::size_t samples = 64;
    unsigned kmax = 1;
    bool paper = false;
    std::size_t digits = 64;
    bool serial = false;
    bool canonical = false;
};

/// A verdict plus the report body.
struct Outcome {
    json body;
    bool positive = true;
};

cl::Guards make_guards(const Options& o) {
    cl::Guards g = cl::Guards::from_environment();
    if (o.max_pos) g.max_pos = *o.max_pos;
    if (o.max_rows) g.max_rows = *o.max_rows;
    return g;
}

cl::StarProfile load_profile(const Options& o) {
    if (o.profile_path.empty()) return cl::fuzz::fuzz_profile();
    const json j = cl::io::read_file(o.profile_path);
    cl::io::require_version(j);
    return cl::io::profile(j);
}

json load(const std::string& path, const char* what) {
    if (path.empty()) throw cl::InputError(std::string("missing --") + what);
    json j = cl::io::read_file(path);
    cl::io::require_version(j);
    return j;
}

/// Owns the triples; star uses the --profile (default: the fuzz toy profile).
struct Context {
    cl::Guards guards;
    cl::RandomTriple random;
    cl::StarTriple star;
    cl::io::Codec codec;

    explicit Context(const Options& o) : guards(make_guards(o)), random(guards), star(load_profile(o), guards) {
        codec.profile = &star.profile();
    }
    const cl::MeasuredTriple& triple(cl::Family f) const {
        return f == cl::Family::random ? static_cast<const cl::MeasuredTriple&>(random) : star;
    }
};

json node_values(const Context& ctx, cl::Family family, const cl::MeasureMap& mu) {
    json out = json::array();
    for (const auto& [nu, x] : mu) out.push_back({{"node", ctx.codec.node(family, nu)}, {"value", cl::io::rational(x)}});
    return out;
}

cl::Rational opt_rational(const std::optional<std::string>& s, const cl::Rational& fallback) {
    return s ? cl::parse_rational(*s) : fallback;
}

Outcome cmd_axioms(const Options& o, Context& ctx) {
    const cl::Creature t = ctx.codec.creature(load(o.creature, "creature"));
    cl::AxiomOptions ao;
    ao.grid_denominator = o.grid;
    ao.samples = o.samples;
    ao.seed = o.seed;
    if (o.theta) ao.theta = cl::parse_rational(*o.theta);
    ao.drop = opt_rational(o.drop, 1);
    const auto rep = cl::check_axioms(ctx.triple(t.family), t, ao);
    json body{{"coefficients_nonnegative", rep.coefficients_nonnegative},
              {"zero_law", rep.zero_law},
              {"alpha_spot", rep.alpha_spot},
              {"gamma_spot", rep.gamma_spot},
              {"beta_cases", rep.beta_cases},
              {"beta_feasible", rep.beta_feasible},
              {"beta_hypothesis_cases", rep.beta_hypothesis_cases},
              {"beta_hypothesis_feasible", rep.beta_hypothesis_feasible},
              {"beta_exhaustive", rep.beta_exhaustive},
              {"nice", rep.nice()}};
    if (rep.beta_counterexample) body["beta_counterexample"] = *rep.beta_counterexample;
    return {body, rep.nice()};
}

Outcome cmd_measure(const Options& o, Context& ctx) {
    const cl::FiniteCandidate s = ctx.codec.candidate(load(o.candidate, "candidate"));
    const cl::Valuation f = ctx.codec.valuation(s.family, load(o.valuation, "valuation"));
    const auto& triple = ctx.triple(s.family);
    const cl::CompiledCandidate compiled(triple, s);
    const auto values = compiled.values(compiled.boundary_vector(f), !o.serial);
    const cl::MeasureMap mu = compiled.to_map(values);
    // Recompute through the definition-literal recursion before reporting.
    if (mu != cl::mval_reference(triple, s, f)) throw cl::LabError("measure kernels disagree");
    const auto semi = cl::check_semi_measure(triple, s, mu);
    const auto cls = cl::classify_candidate(triple, s, f);
    json fronts = json::array();
    for (unsigned m = s.root_level(); m <= s.height; ++m) {
        fronts.push_back({{"level", m}, {"value", cl::io::rational(cl::front_value(triple, s, m))}});
    }
    json body{{"root", cl::io::rational(mu.at(s.root))},
              {"values", node_values(ctx, s.family, mu)},
              {"semi_measure", std::string(cl::verdict_name(semi.verdict))},
              {"normal", cls.normal},
              {"special", cls.special},
              {"fronts", fronts}};
    if (o.epsilon) {
        const auto large = cl::find_large_node(triple, s, f, cl::parse_rational(*o.epsilon));
        body["large_node"] = large ? json{{"node", ctx.codec.node(s.family, large->node)},
                                          {"value", cl::io::rational(large->value)}}
                                   : json(nullptr);
    }
    return {body, true};
}

Outcome cmd_oracle(const Options& o, Context& ctx) {
    const cl::FiniteCandidate s = ctx.codec.candidate(load(o.candidate, "candidate"));
    if (s.family != cl::Family::random) throw cl::InputError("the dyadic oracle applies to random candidates");
    const cl::Valuation f = ctx.codec.valuation(s.family, load(o.valuation, "valuation"));
    const cl::MeasureMap mu = cl::mval(ctx.random, s, f);
    const cl::Rational oracle = cl::dyadic_oracle(s, f);
    const bool equal = mu.at(s.root) == oracle;
    return {json{{"mval_root", cl::io::rational(mu.at(s.root))}, {"oracle", cl::io::rational(oracle)}, {"equal", equal}},
            equal};
}

cl::PartialMap parse_gprime(const std::string& text, const cl::PartialMap& base) {
    // "i:b,i:b" extends g_t.
    cl::PartialMap g = base;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(start, end - start);
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw cl::InputError("g' entries are index:bit");
        const unsigned i = static_cast<unsigned>(std::stoul(item.substr(0, colon)));
        const std::string b = item.substr(colon + 1);
        if (i >= 64 || (b != "0" && b != "1")) throw cl::InputError("bad g' entry '" + item + "'");
        if (g.defines(i)) {
            if (g.value(i) != (b == "1")) throw cl::InputError("g' conflicts with g_t at " + std::to_string(i));
        } else {
            g = g.with(i, b == "1");
        }
        start = end + 1;
    }
    return g;
}

json certificate_json(const cl::StabilizeCertificate& c) {
    json chain = json::array();
    for (std::size_t i = 0; i < c.chain.size(); ++i) {
        json g = json::array();
        for (auto [idx, b] : c.chain[i].pairs()) g.push_back({idx, b});
        chain.push_back({{"g", g}, {"sum", cl::io::rational(c.chain_sums[i])}});
    }
    return {{"a", cl::io::rational(c.a)},
            {"threshold", cl::io::rational(c.threshold)},
            {"a_meets_threshold", c.a_meets_threshold},
            {"gain", cl::io::rational(c.gain)},
            {"steps", c.steps},
            {"chain", chain},
            {"a_star", cl::io::rational(c.a_star)},
            {"final_sum", cl::io::rational(c.final_sum)},
            {"fixpoint_verified", c.fixpoint_verified},
            {"step_bound_holds", c.step_bound_holds},
            {"delta", cl::io::rational(c.delta)},
            {"window", c.window ? json(cl::io::rational(*c.window)) : json(nullptr)},
            {"F_s", cl::io::rational(c.F_s)},
            {"row_min", cl::io::rational(c.row_min)},
            {"row_max", cl::io::rational(c.row_max)},
            {"rows_checked", c.rows_checked},
            {"beta_holds", c.beta_holds},
            {"gamma_holds", c.gamma_holds},
            {"verified", c.verified()}};
}

Outcome cmd_stabilize(const Options& o, Context& ctx) {
    const cl::Creature t = ctx.codec.creature(load(o.creature, "creature"));
    if (t.family != cl::Family::star) throw cl::InputError("stabilization applies to star creatures");
    const auto r = ctx.codec.letter_values(t, load(o.r, "r"));
    const cl::PartialMap g = parse_gprime(o.g_prime, t.g);
    std::optional<cl::Rational> gain;
    if (o.gain) gain = cl::parse_rational(*o.gain);
    try {
        const auto res = cl::greedy_stabilize(ctx.star, t, g, r, gain);
        return {json{{"s", ctx.codec.creature(res.s)}, {"certificate", certificate_json(res.certificate)}},
                res.certificate.verified()};
    } catch (const cl::HypothesisError& e) {
        return {json{{"diagnosis", e.what()}}, false};
    }
}

json witness_json(const Context& ctx, const cl::SplitWitness& w) {
    return {{"s0", w.s0 ? ctx.codec.creature(*w.s0) : json(nullptr)},
            {"s1", w.s1 ? ctx.codec.creature(*w.s1) : json(nullptr)},
            {"c0", cl::io::rational(w.c0)},
            {"c1", cl::io::rational(w.c1)},
            {"target", cl::io::rational(w.target)}};
}

Outcome cmd_split(const Options& o, Context& ctx) {
    const cl::Creature t = ctx.codec.creature(load(o.creature, "creature"));
    const auto r = ctx.codec.letter_values(t, load(o.r, "r"));
    const auto r0 = ctx.codec.letter_values(t, load(o.r0, "r0"));
    const auto r1 = ctx.codec.letter_values(t, load(o.r1, "r1"));
    if (o.route == "greedy") {
        if (t.family != cl::Family::star) throw cl::InputError("the greedy route applies to star creatures");
        const auto res = cl::split_star(ctx.star, t, r, r0, r1);
        json certs = json::array();
        for (const auto& c : res.certificates) certs.push_back(certificate_json(c));
        json body{{"F_t", cl::io::rational(res.F_t)},
                  {"theta", cl::io::rational(res.theta)},
                  {"a0", cl::io::rational(res.a0)},
                  {"a1", cl::io::rational(res.a1)},
                  {"small", cl::io::rational(res.small)},
                  {"route", res.route},
                  {"certificates", certs},
                  {"hypotheses_hold", res.hypotheses_hold},
                  {"verified", res.verified},
                  {"witness", res.witness ? witness_json(ctx, *res.witness) : json(nullptr)},
                  {"diagnosis", res.diagnosis}};
        return {body, res.witness.has_value()};
    }
    if (o.route != "optimal") throw cl::InputError("--route is optimal or greedy");
    const cl::Rational theta = opt_rational(o.theta, cl::double_exp_neg(t.level));
    const cl::Rational drop = opt_rational(o.drop, 1);
    const auto res = cl::beta_split_aligned(ctx.triple(t.family), t, r, r0, r1, theta, drop);
    json body{{"feasible", res.feasible},
              {"F_t", cl::io::rational(res.F_t)},
              {"target", cl::io::rational(res.target)},
              {"theta", cl::io::rational(res.theta)},
              {"drop", cl::io::rational(res.drop)},
              {"M0", res.M0 ? json(cl::io::rational(*res.M0)) : json(nullptr)},
              {"M1", res.M1 ? json(cl::io::rational(*res.M1)) : json(nullptr)},
              {"norm_above_one", res.norm_above_one},
              {"threshold_holds", res.threshold_holds},
              {"witness_verified", res.witness_verified},
              {"diagnosis", res.diagnosis}};
    if (res.feasible) body["witness"] = witness_json(ctx, res.witness);
    return {body, res.feasible && res.witness_verified};
}

cl::Schedule parse_schedule(const std::optional<std::string>& text) {
    if (!text || *text == "default") return cl::default_schedule();
    // Comma list e_0,e_1,...; levels past the list reuse the last entry.
    std::vector<cl::Rational> es;
    std::size_t start = 0;
    while (start <= text->size()) {
        std::size_t end = text->find(',', start);
        if (end == std::string::npos) end = text->size();
        const cl::Rational e = cl::parse_rational(text->substr(start, end - start));
        if (!cl::in_unit_interval(e)) throw cl::InputError("schedule entries lie in [0,1]");
        es.push_back(e);
        start = end + 1;
    }
    return [es](unsigned l) { return es[std::min<std::size_t>(l, es.size() - 1)]; };
}

Outcome cmd_amalgamate(const Options& o, Context& ctx) {
    const json j = load(o.input, "input");
    cl::AmalgamInput in;
    in.p = ctx.codec.candidate(j.at("p"));
    const cl::Family fam = in.p.family;
    in.f = ctx.codec.valuation(fam, j.at("f"));
    for (const auto& nu : j.at("B")) in.B.push_back(ctx.codec.node(fam, nu));
    for (const auto& e : j.at("q")) {
        cl::ValuedCandidate vc{ctx.codec.candidate(e.at("candidate")), ctx.codec.valuation(fam, e.at("boundary"))};
        in.q.emplace(ctx.codec.node(fam, e.at("node")), std::move(vc));
    }
    in.eps = o.epsilon ? cl::parse_rational(*o.epsilon) : cl::io::rational(j.at("eps"));
    in.schedule = parse_schedule(o.schedule);
    const auto res = cl::amalgamate(ctx.triple(fam), in);
    json hyp = json::object(), checks = json::object();
    for (const auto& [k, v] : res.hypotheses) hyp[k] = v;
    for (const auto& [k, v] : res.checks) checks[k] = v;
    json body{{"case", std::string(cl::amalgam_case_name(res.kind))},
              {"mu_p", cl::io::rational(res.mu_p)},
              {"r0_root", cl::io::rational(res.r0_root)},
              {"r1_root", cl::io::rational(res.r1_root)},
              {"claimed", cl::io::rational(res.claimed)},
              {"mu_q", cl::io::rational(res.mu_q)},
              {"normal", res.normal},
              {"hypotheses", hyp},
              {"checks", checks},
              {"diagnosis", res.diagnosis}};
    if (res.q) {
        body["q"] = {{"candidate", ctx.codec.candidate(res.q->candidate)},
                     {"boundary", ctx.codec.valuation(fam, res.q->boundary)}};
    }
    return {body, res.q.has_value()};
}

Outcome cmd_transfer(const Options& o, Context& ctx) {
    cl::TransferMode mode{};
    const cl::TransferInstance inst = ctx.codec.transfer_instance(load(o.instance, "instance"), mode);
    const auto rep = cl::transfer_bound(ctx.star, inst, mode, opt_rational(o.drop, 1));
    json u = json::array(), failing = json::array();
    for (const auto& x : rep.u_max) u.push_back(cl::io::rational(x));
    for (auto i : rep.failing_iv) failing.push_back(i);
    json body{{"a", cl::io::rational(rep.a)},
              {"lhs", cl::io::rational(rep.lhs)},
              {"rhs", cl::io::rational(rep.rhs)},
              {"u_max", u},
              {"failing_iv", failing},
              {"hypothesis_ii", rep.hypothesis_ii},
              {"hypothesis_iv", rep.hypothesis_iv},
              {"norm_above_one", rep.norm_above_one},
              {"inequality_holds", rep.inequality_holds}};
    return {body, rep.inequality_holds};
}

Outcome cmd_profile(const Options& o, Context& ctx) {
    if (!o.paper) return {cl::io::profile(ctx.star.profile()), true};
    const cl::StarProfile p = cl::paper_profile(o.kmax);
    json levels = json::array();
    bool ok = true;
    for (unsigned k = 0; k <= o.kmax; ++k) {
        json phi = json::array(), bits = json::array();
        for (const auto& x : p.phi[k]) {
            const std::string dec = x.get_str();
            phi.push_back(dec.size() <= o.digits ? json(dec) : json(nullptr));
            bits.push_back(cl::bit_length(x));
        }
        for (std::size_t i = 1; i < p.phi[k].size(); ++i) ok = ok && p.phi[k][i - 1] < p.phi[k][i];
        const cl::BigInt& top = p.phi[k].back();
        ok = ok && cl::is_power_of_two(p.N_exact[k]) && top < p.N_exact[k] && p.N_exact[k] <= 2 * top;
        levels.push_back({{"k", k}, {"phi", phi}, {"phi_bit_lengths", bits}, {"N_log2", cl::bit_length(p.N_exact[k]) - 1}});
    }
    return {json{{"mode", "paper"}, {"levels", levels}, {"checks_hold", ok}}, ok};
}

Outcome cmd_template(const Options& o, Context& ctx) {
    json body = json::object();
    bool ok = true;
    if (!o.cover.empty()) {
        cl::FiniteCandidate p = ctx.codec.candidate(load(o.cover, "cover"));
        cl::require_valid_candidate(ctx.triple(p.family), p);
        if (p.family == cl::Family::star) p = cl::cover_star(ctx.star, p);
        const auto h = cl::covering_map(p);
        const auto rep = cl::check_covering_map(p, h);
        json m = json::array();
        for (const cl::Node& nu : p.boundary()) m.push_back({{"node", ctx.codec.node(p.family, nu)}, {"bits", h.at(nu)}});
        body["covering_map"] = m;
        body["blocks_bijective"] = rep.blocks_bijective;
        body["prefix_free"] = rep.prefix_free;
        body["kraft_sum"] = cl::io::rational(rep.kraft_sum);
        body["uniform_length"] = rep.uniform_length;
        body["injective_per_level"] = rep.injective_per_level;
        ok = rep.blocks_bijective && rep.prefix_free && rep.kraft_sum == 1 && rep.injective_per_level;
    }
    if (!o.named.empty()) {
        const auto prefix = ctx.codec.named_prefix(load(o.named, "named"));
        json v = json::array();
        for (const auto& x : cl::validate_named_prefix(prefix)) {
            v.push_back({{"index", x.index}, {"tuple", x.tuple}, {"message", x.message}});
        }
        body["named_prefix_violations"] = v;
        ok = ok && v.empty();
    }
    if (!o.templ.empty()) {
        const cl::PreTemplate t = ctx.codec.pretemplate(load(o.templ, "template"));
        const auto cand = cl::validate_template_candidates(t, ctx.random, ctx.star);
        body["candidate_violations"] = cand;
        body["y_star_size"] = t.y_star().size();
        ok = ok && cand.empty();
        if (o.canonical) body["canonical"] = ctx.codec.pretemplate(cl::canonical_form(t));
        if (o.restrict_to) {
            const cl::PreTemplate r = cl::restrict_template(t, cl::BigInt(*o.restrict_to));
            body["restricted"] = ctx.codec.pretemplate(r);
            body["restriction_extended_by_t"] = cl::properly_extends(r, t);
        }
        if (!o.other.empty()) {
            const cl::PreTemplate t2 = ctx.codec.pretemplate(load(o.other, "other"));
            std::string why;
            const bool ext = cl::properly_extends(t, t2, &why);
            body["properly_extends"] = ext;
            if (!ext) body["extension_failure"] = why;
            body["isomorphic"] = cl::isomorphic(t, t2);
        }
    }
    if (body.empty()) throw cl::InputError("template needs --template, --named or --cover");
    return {body, ok};
}

Outcome cmd_fuzz(const Options& o, Context& ctx) {
    const auto res = cl::fuzz::run_suite(o.suite, o.seed, o.count, ctx.guards);
    json body = cl::fuzz::report(res);
    body.erase("version");
    return {body, res.passed()};
}

void render_text(const json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) render_text(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"creature-lab: measured tree creatures with exact arithmetic"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", o.seed, "Seed for randomized checks");
    app.add_option("--count", o.count, "Instances per fuzz suite");
    app.add_option("--max-pos", o.max_pos, "Guard on |pos|");
    app.add_option("--max-rows", o.max_rows, "Guard on F* rows");
    app.add_option("--drop", o.drop, "Allowed norm drop");
    app.add_option("--theta", o.theta, "Loss parameter of the split");
    app.add_option("--gain", o.gain, "Stabilization gain");
    app.add_option("--schedule", o.schedule, "Amalgamation schedule: default or e0,e1,...");
    app.add_option("--epsilon", o.epsilon, "Epsilon for amalgamation and large nodes");
    app.add_option("--profile", o.profile_path, "Star profile JSON (default: N=4, cap 2, budget 1)");
    app.add_flag("--timing", o.timing, "Add wall-clock timing to the report");

    auto* axioms = app.add_subcommand("axioms", "Decide the niceness axioms for one creature");
    axioms->add_option("--creature", o.creature)->required();
    axioms->add_option("--grid", o.grid, "Grid denominator for clause (beta)");
    axioms->add_option("--samples", o.samples);

    auto* measure = app.add_subcommand("measure", "Measure recursion on a candidate");
    measure->add_option("--candidate", o.candidate)->required();
    measure->add_option("--valuation", o.valuation)->required();
    measure->add_flag("--serial", o.serial, "Use the serial kernel");

    auto* stabilize = app.add_subcommand("stabilize", "Greedy stabilization of a star creature");
    stabilize->add_option("--creature", o.creature)->required();
    stabilize->add_option("--r", o.r)->required();
    stabilize->add_option("--g", o.g_prime, "Extension g' of g_t as index:bit,...");

    auto* split = app.add_subcommand("split", "Clause (beta) split");
    split->add_option("--creature", o.creature)->required();
    split->add_option("--r", o.r)->required();
    split->add_option("--r0", o.r0)->required();
    split->add_option("--r1", o.r1)->required();
    split->add_option("--route", o.route, "optimal (two maxima) or greedy (stabilization)");

    auto* amalgamate = app.add_subcommand("amalgamate", "Avoid-or-front amalgamation");
    amalgamate->add_option("--input", o.input)->required();

    auto* transfer = app.add_subcommand("transfer", "Averaging transfer bound");
    transfer->add_option("--instance", o.instance)->required();

    auto* profile = app.add_subcommand("profile", "Show a star profile");
    profile->add_flag("--paper", o.paper, "Exact phi_k and N_k");
    profile->add_option("--kmax", o.kmax)->check(CLI::Range(0, 8));
    profile->add_option("--digits", o.digits, "Longest decimal printed in full");

    auto* templ = app.add_subcommand("template", "Pre-templates, named prefixes and covering maps");
    templ->add_option("--template", o.templ);
    templ->add_option("--other", o.other, "Second template for extension and isomorphism");
    templ->add_option("--restrict", o.restrict_to, "Restrict to labels below this bound");
    templ->add_flag("--canonical", o.canonical);
    templ->add_option("--named", o.named, "Named prefix to validate");
    templ->add_option("--cover", o.cover, "Candidate whose covering map to compute");

    auto* oracle = app.add_subcommand("oracle", "Dyadic oracle against the recursion");
    oracle->add_option("--candidate", o.candidate)->required();
    oracle->add_option("--valuation", o.valuation)->required();

    auto* fuzz = app.add_subcommand("fuzz", "Seeded property suite");
    fuzz->add_option("suite", o.suite)->required()->check(CLI::IsMember(cl::fuzz::suite_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Context ctx(o);
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        CLI::App* sub = app.get_subcommands().front();
        const std::string verb = sub->get_name();
        if (sub == axioms) out = cmd_axioms(o, ctx);
        else if (sub == measure) out = cmd_measure(o, ctx);
        else if (sub == stabilize) out = cmd_stabilize(o, ctx);
        else if (sub == split) out = cmd_split(o, ctx);
        else if (sub == amalgamate) out = cmd_amalgamate(o, ctx);
        else if (sub == transfer) out = cmd_transfer(o, ctx);
        else if (sub == profile) out = cmd_profile(o, ctx);
        else if (sub == templ) out = cmd_template(o, ctx);
        else if (sub == oracle) out = cmd_oracle(o, ctx);
        else out = cmd_fuzz(o, ctx);
        json report{{"version", cl::io::schema_version},
                    {"command", verb},
                    {"verdict", out.positive ? "ok" : "negative"},
                    {"report", out.body}};
        if (o.timing) {
            report["timing_ms"] =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        if (o.format == "text") render_text(report, "", std::cout);
        else std::cout << cl::io::dump(report);
        return out.positive ? 0 : 1;
    } catch (const cl::GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 3;
    } catch (const cl::HypothesisError& e) {
        std::cerr << "hypothesis: " << e.what() << "\n";
        return 1;
    } catch (const cl::InputError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
