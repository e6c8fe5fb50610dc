#pragma once

#include <map>
#include <string>
#include <vector>

#include "creature_lab/candidate.hpp"
#include "creature_lab/random/random_triple.hpp"
#include "creature_lab/star/star_triple.hpp"

namespace testing_helpers {

using namespace creature_lab;

inline Rational q(const char* text) { return parse_rational(text); }

inline std::vector<Rational> vec(std::initializer_list<const char*> xs) {
    std::vector<Rational> out;
    for (const char* x : xs) out.push_back(parse_rational(x));
    return out;
}

// Full binary random candidate.
inline FiniteCandidate full_random(Node root, unsigned height) {
    std::map<Node, Creature> cs;
    std::vector<Node> level{root};
    for (std::size_t l = root.size(); l < height; ++l) {
        std::vector<Node> next;
        for (const Node& nu : level) {
            cs.emplace(nu, creature_r(nu, {0, 1}));
            next.push_back(extend(nu, 0));
            next.push_back(extend(nu, 1));
        }
        level = std::move(next);
    }
    return FiniteCandidate::from_creatures(Family::random, root, height, cs);
}

inline Valuation constant(const FiniteCandidate& s, const Rational& x) {
    Valuation f;
    for (const Node& nu : s.boundary()) f[nu] = x;
    return f;
}

// Letters of {0..2^N-1} with bit 0 clear.
inline std::vector<Letter> even_letters(unsigned N) {
    std::vector<Letter> out;
    for (Letter f = 0; f < (Letter{1} << N); f += 2) out.push_back(f);
    return out;
}

inline std::vector<Letter> all_letters(unsigned N) {
    std::vector<Letter> out;
    for (Letter f = 0; f < (Letter{1} << N); ++f) out.push_back(f);
    return out;
}

inline StarProfile profile_n4_b1(unsigned levels = 3) { return uniform_toy_profile(levels, 4, 4, 1); }

}  // namespace testing_helpers
