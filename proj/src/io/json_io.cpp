#include "creature_lab/io/json_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace creature_lab::io {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw InputError(std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
    return *it;
}

unsigned natural(const json& j, const char* what) {
    if (!j.is_number_unsigned()) throw InputError(std::string(what) + " must be a natural number");
    const auto v = j.get<std::uint64_t>();
    if (v > 1'000'000) throw InputError(std::string(what) + " is out of range");
    return static_cast<unsigned>(v);
}

const json& array(const json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
    return j;
}

}  // namespace

json rational(const Rational& x) { return to_string(x); }

Rational rational(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(BigInt(std::to_string(j.get<long long>())));
    throw InputError("rationals are written as \"p/q\" strings");
}

void require_version(const json& j) {
    if (!j.is_object() || !j.contains("version")) throw InputError("missing mandatory field 'version'");
    if (j["version"] != schema_version) throw InputError("unsupported schema version " + j["version"].dump());
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json Codec::letter(Family family, unsigned level, Letter f) const {
    if (family == Family::random) return f;
    unsigned width = profile ? profile->n_at(level) : std::max(1U, static_cast<unsigned>(std::bit_width(f)));
    std::string s(width, '0');
    for (unsigned i = 0; i < width; ++i) {
        if ((f >> i) & 1U) s[i] = '1';
    }
    return s;
}

Letter Codec::letter(Family family, unsigned level, const json& j) const {
    if (family == Family::random) {
        if (!j.is_number_unsigned() || j.get<std::uint64_t>() > 1) throw InputError("random letters are 0 or 1");
        return j.get<Letter>();
    }
    if (!j.is_string()) throw InputError("star letters are bit strings");
    const auto s = j.get<std::string>();
    if (s.empty() || s.size() > 64 || s.find_first_not_of("01") != std::string::npos) {
        throw InputError("bad star letter '" + s + "'");
    }
    if (profile && profile->mode == StarProfile::Mode::toy && level < profile->levels() &&
        s.size() != profile->n_at(level)) {
        throw InputError("star letter '" + s + "' at level " + std::to_string(level) + " must have length " +
                         std::to_string(profile->n_at(level)));
    }
    Letter f = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1') f |= Letter{1} << i;
    }
    return f;
}

json Codec::node(Family family, const Node& nu) const {
    json out = json::array();
    for (std::size_t i = 0; i < nu.size(); ++i) out.push_back(letter(family, static_cast<unsigned>(i), nu[i]));
    return out;
}

Node Codec::node(Family family, const json& j) const {
    array(j, "node");
    Node out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(letter(family, static_cast<unsigned>(i), j[i]));
    return out;
}

json Codec::creature(const Creature& t) const {
    json g = json::array();
    for (auto [i, b] : t.g.pairs()) g.push_back({i, b});
    json P = json::array();
    for (Letter f : t.letters) P.push_back(letter(t.family, t.level, f));
    return {{"family", std::string(family_name(t.family))},
            {"k", t.level},
            {"eta", node(t.family, t.stem)},
            {"norm", rational(t.norm)},
            {"g", g},
            {"P", P}};
}

Creature Codec::creature(const json& j) const {
    Creature t;
    t.family = parse_family(field(j, "family").get<std::string>());
    t.level = natural(field(j, "k"), "k");
    t.stem = node(t.family, field(j, "eta"));
    if (t.stem.size() != t.level) throw InputError("creature level differs from |eta|");
    t.norm = rational(field(j, "norm"));
    if (j.contains("g")) {
        for (const auto& pair : array(j["g"], "g")) {
            if (!pair.is_array() || pair.size() != 2) throw InputError("g entries are [index, bit] pairs");
            const unsigned i = natural(pair[0], "g index");
            const unsigned b = natural(pair[1], "g bit");
            if (i >= 64 || b > 1) throw InputError("g entry out of range");
            if (t.g.defines(i)) throw InputError("g defines an index twice");
            t.g = t.g.with(i, b == 1);
        }
    }
    for (const auto& f : array(field(j, "P"), "P")) t.letters.push_back(letter(t.family, t.level, f));
    std::sort(t.letters.begin(), t.letters.end());
    if (std::adjacent_find(t.letters.begin(), t.letters.end()) != t.letters.end()) {
        throw InputError("P lists a letter twice");
    }
    return t;
}

json Codec::candidate(const FiniteCandidate& s) const {
    json cs = json::array();
    for (const auto& [nu, t] : s.creatures) cs.push_back({{"node", node(s.family, nu)}, {"creature", creature(t)}});
    json tree = json::array();
    for (const Node& nu : s.tree) tree.push_back(node(s.family, nu));
    return {{"version", schema_version},
            {"family", std::string(family_name(s.family))},
            {"root", node(s.family, s.root)},
            {"height", s.height},
            {"creatures", cs},
            {"tree", tree}};
}

FiniteCandidate Codec::candidate(const json& j) const {
    const Family family = parse_family(field(j, "family").get<std::string>());
    const Node root = node(family, field(j, "root"));
    const unsigned height = natural(field(j, "height"), "height");
    if (height < root.size()) throw InputError("height below the root level");
    std::map<Node, Creature> creatures;
    for (const auto& e : array(field(j, "creatures"), "creatures")) {
        const Node nu = node(family, field(e, "node"));
        Creature t = creature(field(e, "creature"));
        if (t.family != family) throw InputError("creature family differs from the candidate family");
        if (!creatures.emplace(nu, std::move(t)).second) throw InputError("node " + to_string(nu) + " listed twice");
    }
    FiniteCandidate s = FiniteCandidate::from_creatures(family, root, height, std::move(creatures));
    if (j.contains("tree")) {
        std::set<Node> tree;
        for (const auto& e : array(j["tree"], "tree")) tree.insert(node(family, e));
        if (tree != s.tree) throw InputError("listed tree differs from the tree grown from the creatures");
    }
    return s;
}

json Codec::valuation(Family family, const Valuation& f) const {
    json vs = json::array();
    for (const auto& [nu, x] : f) vs.push_back({{"node", node(family, nu)}, {"value", rational(x)}});
    return {{"version", schema_version}, {"values", vs}};
}

Valuation Codec::valuation(Family family, const json& j) const {
    Valuation out;
    for (const auto& e : array(field(j, "values"), "values")) {
        const Node nu = node(family, field(e, "node"));
        if (!out.emplace(nu, rational(field(e, "value"))).second) {
            throw InputError("valuation lists " + to_string(nu) + " twice");
        }
    }
    return out;
}

std::vector<Rational> Codec::letter_values(const Creature& t, const json& j) const {
    std::vector<Rational> out(t.letters.size());
    std::vector<bool> seen(t.letters.size());
    for (const auto& e : array(field(j, "values"), "values")) {
        const Letter f = letter(t.family, t.level, field(e, "letter"));
        const std::size_t i = t.index_of(f);
        if (i == Creature::npos) throw InputError("valuation letter outside P");
        if (seen[i]) throw InputError("valuation lists a letter twice");
        seen[i] = true;
        out[i] = rational(field(e, "value"));
        if (!in_unit_interval(out[i])) throw InputError("valuation value outside [0,1]");
    }
    return out;
}

json Codec::letter_values(const Creature& t, std::span<const Rational> r) const {
    json vs = json::array();
    for (std::size_t i = 0; i < t.letters.size(); ++i) {
        vs.push_back({{"letter", letter(t.family, t.level, t.letters[i])}, {"value", rational(r[i])}});
    }
    return {{"version", schema_version}, {"values", vs}};
}

json Codec::pretemplate(const PreTemplate& t) const {
    json w = json::array(), z = json::array(), k = json::object(), c = json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        w.push_back(t.w[i].get_str());
        z.push_back(std::string(family_name(t.z[i])));
        k[t.w[i].get_str()] = t.k[i];
    }
    c.push_back(candidate(t.first));
    for (const auto& m : t.later) {
        json obj = json::object();
        for (const auto& [y, s] : m) obj[to_string(y)] = candidate(s);
        c.push_back(obj);
    }
    return {{"version", schema_version}, {"w", w}, {"z", z}, {"k", k}, {"c", c}};
}

PreTemplate Codec::pretemplate(const json& j) const {
    std::vector<BigInt> w;
    std::vector<Family> z;
    std::vector<unsigned> k;
    for (const auto& label : array(field(j, "w"), "w")) {
        if (!label.is_string() && !label.is_number_unsigned()) throw InputError("labels are naturals");
        const std::string text = label.is_string() ? label.get<std::string>() : std::to_string(label.get<std::uint64_t>());
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
            throw InputError("bad label '" + text + "'");
        }
        w.emplace_back(text);
        z.push_back(Family::random);
    }
    const auto& zs = array(field(j, "z"), "z");
    if (zs.size() != w.size()) throw InputError("z must have one flag per label");
    for (std::size_t i = 0; i < w.size(); ++i) z[i] = parse_family(zs[i].get<std::string>());
    const auto& ks = field(j, "k");
    for (const auto& label : w) k.push_back(natural(field(ks, label.get_str().c_str()), "k"));
    const auto& cs = array(field(j, "c"), "c");
    if (cs.size() != w.size()) throw InputError("c must have one entry per label");
    FiniteCandidate first = candidate(cs[0]);
    std::vector<std::map<YTuple, FiniteCandidate>> later;
    for (std::size_t i = 1; i < cs.size(); ++i) {
        if (!cs[i].is_object()) throw InputError("c entries after the first are maps keyed by Y-tuples");
        std::map<YTuple, FiniteCandidate> m;
        for (const auto& [key, value] : cs[i].items()) m.emplace(parse_ytuple(key), candidate(value));
        later.push_back(std::move(m));
    }
    return build_pretemplate(std::move(w), std::move(z), std::move(k), std::move(first), std::move(later));
}

json Codec::named_prefix(const NamedPrefix& p) const {
    json ts = json::array(), names = json::array();
    for (const auto& t : p.templates) ts.push_back(pretemplate(t));
    for (const auto& m : p.names) {
        json obj = json::object();
        for (const auto& [y, bits] : m) obj[to_string(y)] = bits;
        names.push_back(obj);
    }
    return {{"version", schema_version}, {"templates", ts}, {"names", names}};
}

NamedPrefix Codec::named_prefix(const json& j) const {
    NamedPrefix p;
    for (const auto& t : array(field(j, "templates"), "templates")) p.templates.push_back(pretemplate(t));
    for (const auto& m : array(field(j, "names"), "names")) {
        if (!m.is_object()) throw InputError("names are maps from Y-tuples to bit strings");
        std::map<YTuple, std::string> tau;
        for (const auto& [key, value] : m.items()) tau.emplace(parse_ytuple(key), value.get<std::string>());
        p.names.push_back(std::move(tau));
    }
    return p;
}

json Codec::transfer_instance(const TransferInstance& inst, TransferMode mode) const {
    json r = json::array(), u = json::array();
    for (const auto& x : inst.r) r.push_back(rational(x));
    for (const auto& row : inst.u) {
        json jr = json::array();
        for (const auto& x : row) jr.push_back(rational(x));
        u.push_back(jr);
    }
    return {{"version", schema_version},
            {"mode", mode == TransferMode::plain ? "plain" : "bit_split"},
            {"creature", creature(inst.t)},
            {"gamma", rational(inst.gamma)},
            {"y_count", inst.y_count},
            {"r", r},
            {"u", u}};
}

TransferInstance Codec::transfer_instance(const json& j, TransferMode& mode) const {
    TransferInstance inst;
    const std::string m = j.value("mode", "plain");
    if (m == "plain") mode = TransferMode::plain;
    else if (m == "bit_split") mode = TransferMode::bit_split;
    else throw InputError("transfer mode must be plain or bit_split");
    inst.t = creature(field(j, "creature"));
    inst.gamma = rational(field(j, "gamma"));
    inst.y_count = natural(field(j, "y_count"), "y_count");
    for (const auto& x : array(field(j, "r"), "r")) inst.r.push_back(rational(x));
    for (const auto& row : array(field(j, "u"), "u")) {
        std::vector<Rational> vals;
        for (const auto& x : array(row, "u row")) vals.push_back(rational(x));
        inst.u.push_back(std::move(vals));
    }
    return inst;
}

json profile(const StarProfile& p) {
    if (p.mode == StarProfile::Mode::paper) {
        // Values past 256 bits are summarized by their bit length.
        json levels = json::array();
        for (std::size_t k = 0; k < p.phi.size(); ++k) {
            json phi = json::array(), bits = json::array();
            for (const auto& x : p.phi[k]) {
                phi.push_back(bit_length(x) <= 256 ? json(x.get_str()) : json(nullptr));
                bits.push_back(bit_length(x));
            }
            levels.push_back({{"k", k}, {"phi", phi}, {"phi_bit_lengths", bits}, {"N_log2", bit_length(p.N_exact[k]) - 1}});
        }
        return {{"version", schema_version}, {"mode", "paper"}, {"levels", levels}};
    }
    json thr = json::object();
    if (p.thresholds.beta) thr["beta"] = rational(*p.thresholds.beta);
    if (p.thresholds.stabilize) thr["stabilize"] = rational(*p.thresholds.stabilize);
    if (p.thresholds.stabilize_gain) thr["gain"] = rational(*p.thresholds.stabilize_gain);
    return {{"version", schema_version}, {"mode", "toy"}, {"N", p.N}, {"cap", p.cap}, {"budget", p.budget},
            {"thresholds", thr}};
}

StarProfile profile(const json& j) {
    const std::string mode = j.value("mode", "toy");
    if (mode == "paper") return paper_profile(natural(field(j, "kmax"), "kmax"));
    if (mode != "toy") throw InputError("profile mode must be toy or paper");
    std::vector<unsigned> N;
    for (const auto& x : array(field(j, "N"), "N")) N.push_back(natural(x, "N"));
    std::vector<std::vector<std::uint64_t>> cap;
    for (const auto& row : array(field(j, "cap"), "cap")) {
        std::vector<std::uint64_t> r;
        for (const auto& x : array(row, "cap row")) r.push_back(natural(x, "cap"));
        cap.push_back(std::move(r));
    }
    std::vector<std::uint64_t> budget;
    for (const auto& x : array(field(j, "budget"), "budget")) budget.push_back(natural(x, "budget"));
    StarThresholds thr;
    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        if (t.contains("beta")) thr.beta = rational(t["beta"]);
        if (t.contains("stabilize")) thr.stabilize = rational(t["stabilize"]);
        if (t.contains("gain")) thr.stabilize_gain = rational(t["gain"]);
    }
    return toy_profile(std::move(N), std::move(cap), std::move(budget), std::move(thr));
}

}  // namespace creature_lab::io
