#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "creature_lab/candidate.hpp"
#include "creature_lab/star/star_lemmas.hpp"
#include "creature_lab/star/star_profile.hpp"
#include "creature_lab/templates/pretemplate.hpp"

namespace creature_lab::io {

using json = nlohmann::json;  // std::map objects, so keys come out sorted

inline constexpr int schema_version = 1;

/// Star letters are written as bit strings s with s[i] = f(i); the profile
/// fixes their width per level. Without a profile, widths are taken from
/// the input and the shortest form is written.
struct Codec {
    const StarProfile* profile = nullptr;

    json letter(Family family, unsigned level, Letter f) const;
    Letter letter(Family family, unsigned level, const json& j) const;
    json node(Family family, const Node& nu) const;
    Node node(Family family, const json& j) const;

    json creature(const Creature& t) const;
    Creature creature(const json& j) const;

    json candidate(const FiniteCandidate& s) const;
    FiniteCandidate candidate(const json& j) const;

    json valuation(Family family, const Valuation& f) const;
    Valuation valuation(Family family, const json& j) const;

    /// Values indexed by the letters of t: {"values":[{"letter":..,"value":..}]}.
    /// Letters not listed get 0.
    std::vector<Rational> letter_values(const Creature& t, const json& j) const;
    json letter_values(const Creature& t, std::span<const Rational> r) const;

    json pretemplate(const PreTemplate& t) const;
    PreTemplate pretemplate(const json& j) const;
    json named_prefix(const NamedPrefix& p) const;
    NamedPrefix named_prefix(const json& j) const;

    json transfer_instance(const TransferInstance& inst, TransferMode mode) const;
    TransferInstance transfer_instance(const json& j, TransferMode& mode) const;
};

json rational(const Rational& x);
Rational rational(const json& j);

json profile(const StarProfile& p);
StarProfile profile(const json& j);

/// Throws InputError unless `j` is an object with "version": 1.
void require_version(const json& j);

json parse_text(const std::string& text);
json read_file(const std::string& path);
/// Two-space indentation, trailing newline.
std::string dump(const json& j);

}  // namespace creature_lab::io
