#include "creature_lab/templates/pretemplate.hpp"

#include <algorithm>
#include <bit>

namespace creature_lab {

std::string to_string(const YTuple& y) {
    std::string out;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (i > 0) out += '|';
        out += to_string(y[i]);
    }
    return out;
}

YTuple parse_ytuple(const std::string& text) {
    YTuple out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = text.find('|', start);
        out.push_back(parse_node(text.substr(start, end == std::string::npos ? std::string::npos : end - start)));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::size_t PreTemplate::index_of(const BigInt& label) const {
    const auto it = std::lower_bound(w.begin(), w.end(), label);
    return it != w.end() && *it == label ? static_cast<std::size_t>(it - w.begin()) : w.size();
}

const FiniteCandidate& PreTemplate::candidate(std::size_t i, const YTuple& y) const {
    if (i == 0) return first;
    const auto it = later.at(i - 1).find(y);
    if (it == later[i - 1].end()) throw InputError("no candidate at coordinate " + std::to_string(i) + " for " + to_string(y));
    return it->second;
}

namespace {

void check_candidate_shape(const FiniteCandidate& c, Family family, unsigned height, const std::string& where) {
    if (c.family != family) throw InputError(where + ": family does not match the coordinate flag");
    if (c.height != height) {
        throw InputError(where + ": height " + std::to_string(c.height) + " differs from k = " + std::to_string(height));
    }
    if (c.boundary().empty()) throw InputError(where + ": candidate has no boundary");
}

}  // namespace

PreTemplate build_pretemplate(std::vector<BigInt> w, std::vector<Family> z, std::vector<unsigned> k,
                              FiniteCandidate first, std::vector<std::map<YTuple, FiniteCandidate>> later,
                              std::size_t max_tuples) {
    if (w.empty()) throw InputError("a pre-template needs at least one coordinate");
    if (z.size() != w.size() || k.size() != w.size()) throw InputError("w, z and k must have equal length");
    if (later.size() + 1 != w.size()) throw InputError("c must have one entry per coordinate");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (sgn(w[i]) < 0) throw InputError("labels must be naturals");
        if (i > 0 && !(w[i - 1] < w[i])) throw InputError("labels must be strictly increasing");
    }
    PreTemplate t{std::move(w), std::move(z), std::move(k), std::move(first), std::move(later), {}};
    check_candidate_shape(t.first, t.z[0], t.k[0], "coordinate 0");
    std::set<YTuple> current;
    for (const Node& s : t.first.boundary()) current.insert(YTuple{s});
    t.Y.push_back(current);
    for (std::size_t i = 1; i < t.w.size(); ++i) {
        const auto& cmap = t.later[i - 1];
        for (const auto& [y, c] : cmap) {
            if (!current.count(y)) {
                throw InputError("coordinate " + std::to_string(i) + ": argument " + to_string(y) + " is not in Y");
            }
        }
        std::set<YTuple> next;
        for (const YTuple& y : current) {
            const auto it = cmap.find(y);
            if (it == cmap.end()) {
                throw InputError("coordinate " + std::to_string(i) + ": c is missing argument " + to_string(y));
            }
            check_candidate_shape(it->second, t.z[i], t.k[i], "coordinate " + std::to_string(i) + " at " + to_string(y));
            for (const Node& s : it->second.boundary()) {
                YTuple e = y;
                e.push_back(s);
                next.insert(std::move(e));
                check_guard(next.size(), max_tuples, "Y-tuple");
            }
        }
        current = std::move(next);
        t.Y.push_back(current);
    }
    return t;
}

std::vector<std::string> validate_template_candidates(const PreTemplate& t, const MeasuredTriple& random,
                                                      const MeasuredTriple& star) {
    std::vector<std::string> out;
    auto check = [&](const FiniteCandidate& c, std::size_t i, const std::string& where) {
        const MeasuredTriple& triple = t.z[i] == Family::random ? random : star;
        for (const auto& v : validate_candidate(triple, c).violations) out.push_back(where + ": " + v);
    };
    check(t.first, 0, "coordinate 0");
    for (std::size_t i = 1; i < t.size(); ++i) {
        for (const auto& [y, c] : t.later[i - 1]) check(c, i, "coordinate " + std::to_string(i) + " at " + to_string(y));
    }
    return out;
}

PreTemplate restrict_template(const PreTemplate& t, const BigInt& zeta) {
    std::size_t n = 0;
    while (n < t.size() && t.w[n] < zeta) ++n;
    if (n == 0) throw InputError("restriction below the first coordinate leaves an empty template");
    PreTemplate out;
    out.w.assign(t.w.begin(), t.w.begin() + n);
    out.z.assign(t.z.begin(), t.z.begin() + n);
    out.k.assign(t.k.begin(), t.k.begin() + n);
    out.first = t.first;
    out.later.assign(t.later.begin(), t.later.begin() + (n - 1));
    out.Y.assign(t.Y.begin(), t.Y.begin() + n);
    return out;
}

bool project_tuple(const PreTemplate& from, const YTuple& y, const PreTemplate& onto, YTuple& out) {
    out.clear();
    for (std::size_t j = 0; j < onto.size(); ++j) {
        const std::size_t i = from.index_of(onto.w[j]);
        if (i == from.size() || i >= y.size()) return false;
        out.push_back(truncate(y[i], onto.k[j]));
    }
    return true;
}

bool properly_extends(const PreTemplate& t, const PreTemplate& t2, std::string* why) {
    auto fail = [&](std::string msg) {
        if (why) *why = std::move(msg);
        return false;
    };
    // (α)
    std::vector<std::size_t> where(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        where[j] = t2.index_of(t.w[j]);
        if (where[j] == t2.size()) return fail("label " + t.w[j].get_str() + " missing from the extension");
        if (t.z[j] != t2.z[where[j]]) return fail("label " + t.w[j].get_str() + " changes family");
        if (t.k[j] > t2.k[where[j]]) return fail("k decreases at label " + t.w[j].get_str());
    }
    // (β), first coordinate of t
    const std::size_t l_star = where[0];
    if (l_star == 0) {
        if (!end_extends(t.first, t2.first)) return fail("first candidate is not end-extended");
    } else {
        for (const YTuple& y : t2.Y[l_star - 1]) {
            if (!end_extends(t.first, t2.candidate(l_star, y))) {
                return fail("first candidate of t is not end-extended at " + to_string(y));
            }
        }
    }
    // (β), later coordinates of t: restrict tuples of t2 to the coordinates
    // of t below alpha_l and to the heights of t.
    for (std::size_t j = 1; j < t.size(); ++j) {
        const std::size_t l = where[j];
        for (const YTuple& y : t2.Y[l - 1]) {
            YTuple proj;
            for (std::size_t jj = 0; jj < j; ++jj) proj.push_back(truncate(y[where[jj]], t.k[jj]));
            if (!t.Y[j - 1].count(proj)) {
                return fail("restriction of " + to_string(y) + " is not in Y of t at label " + t.w[j - 1].get_str());
            }
            if (!end_extends(t.candidate(j, proj), t2.candidate(l, y))) {
                return fail("candidate at label " + t.w[j].get_str() + ", " + to_string(y) + " is not end-extended");
            }
        }
    }
    return true;
}

PreTemplate canonical_form(const PreTemplate& t) {
    PreTemplate out = t;
    for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] = static_cast<unsigned long>(i);
    return out;
}

bool isomorphic(const PreTemplate& a, const PreTemplate& b) {
    return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

std::vector<NamedPrefixViolation> validate_named_prefix(const NamedPrefix& p) {
    std::vector<NamedPrefixViolation> out;
    if (p.names.size() != p.templates.size()) {
        out.push_back({0, "", "names and templates differ in length"});
        return out;
    }
    for (std::size_t n = 0; n < p.templates.size(); ++n) {
        const auto& Ystar = p.templates[n].y_star();
        const auto& tau = p.names[n];
        for (const auto& [y, bits] : tau) {
            if (!Ystar.count(y)) out.push_back({n, to_string(y), "name defined outside Y_*"});
            if (bits.size() != n || bits.find_first_not_of("01") != std::string::npos) {
                out.push_back({n, to_string(y), "name is not a bit string of length " + std::to_string(n)});
            }
        }
        for (const YTuple& y : Ystar) {
            if (!tau.count(y)) out.push_back({n, to_string(y), "name undefined on a Y_* element"});
        }
    }
    for (std::size_t n = 0; n + 1 < p.templates.size(); ++n) {
        const PreTemplate& a = p.templates[n];
        const PreTemplate& b = p.templates[n + 1];
        std::string why;
        if (!properly_extends(a, b, &why)) {
            out.push_back({n, "", "template " + std::to_string(n + 1) + " does not properly extend: " + why});
            continue;
        }
        for (const auto& [y, bits] : p.names[n + 1]) {
            YTuple proj;
            if (!b.y_star().count(y) || !project_tuple(b, y, a, proj)) continue;
            const auto it = p.names[n].find(proj);
            if (it == p.names[n].end()) {
                out.push_back({n, to_string(y), "restricted tuple " + to_string(proj) + " has no name"});
            } else if (!(it->second.size() < bits.size() && bits.compare(0, it->second.size(), it->second) == 0)) {
                out.push_back({n, to_string(y), "name " + bits + " does not extend " + it->second});
            }
        }
    }
    return out;
}

std::map<Node, std::string> covering_map(const FiniteCandidate& s) {
    std::map<Node, std::string> h;
    h[s.root] = "";
    // std::set orders parents before children.
    for (const Node& eta : s.tree) {
        const auto it = s.creatures.find(eta);
        if (it == s.creatures.end()) continue;
        const auto& pos = it->second.letters;
        const BigInt size = static_cast<unsigned long>(pos.size());
        if (!is_power_of_two(size)) {
            throw InputError("|pos| = " + std::to_string(pos.size()) + " at " + to_string(eta) + " is not a power of two");
        }
        const unsigned bits = static_cast<unsigned>(bit_length(size) - 1);
        const std::string& prefix = h.at(eta);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            std::string block(bits, '0');
            for (unsigned b = 0; b < bits; ++b) {
                if ((i >> (bits - 1 - b)) & 1U) block[b] = '1';
            }
            h[extend(eta, pos[i])] = prefix + block;
        }
    }
    return h;
}

CoveringReport check_covering_map(const FiniteCandidate& s, const std::map<Node, std::string>& h) {
    CoveringReport rep;
    rep.blocks_bijective = true;
    for (const auto& [eta, t] : s.creatures) {
        const auto parent = h.find(eta);
        if (parent == h.end()) {
            rep.blocks_bijective = false;
            continue;
        }
        const std::size_t m = t.letters.size();
        const std::size_t width = static_cast<std::size_t>(std::bit_width(m)) - 1;
        if ((std::size_t{1} << width) != m) {
            rep.blocks_bijective = false;
            continue;
        }
        // Full block: the m children carry m distinct width-bit suffixes.
        std::set<std::string> suffixes;
        for (Letter f : t.letters) {
            const auto c = h.find(extend(eta, f));
            if (c == h.end() || c->second.size() != parent->second.size() + width ||
                c->second.compare(0, parent->second.size(), parent->second) != 0) {
                rep.blocks_bijective = false;
                continue;
            }
            suffixes.insert(c->second.substr(parent->second.size()));
        }
        if (suffixes.size() != m) rep.blocks_bijective = false;
    }
    const auto boundary = s.boundary();
    std::vector<std::string> images;
    rep.kraft_sum = 0;
    for (const Node& nu : boundary) {
        const auto it = h.find(nu);
        if (it == h.end()) continue;
        images.push_back(it->second);
        rep.kraft_sum += pow2(-static_cast<long>(it->second.size()));
    }
    std::sort(images.begin(), images.end());
    rep.prefix_free = images.size() == boundary.size();
    rep.uniform_length = true;
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != images.front().size()) rep.uniform_length = false;
        // In sorted order a prefix sits right before some extension of it.
        if (i + 1 < images.size() && images[i + 1].compare(0, images[i].size(), images[i]) == 0) rep.prefix_free = false;
    }
    rep.injective_per_level = true;
    for (unsigned m = s.root_level(); m <= s.height; ++m) {
        std::set<std::string> seen;
        for (const Node& nu : s.level(m)) {
            const auto it = h.find(nu);
            if (it == h.end() || !seen.insert(it->second).second) rep.injective_per_level = false;
        }
    }
    return rep;
}

}  // namespace creature_lab
