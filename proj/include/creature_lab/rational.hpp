#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace creature_lab {

/// Exact rational number, always kept in lowest terms.
using Rational = mpq_class;
/// Arbitrary precision integer.
using BigInt = mpz_class;

/// Parses "p/q", "p" or "-p/q". Throws InputError on malformed text or a
/// zero denominator. The result is canonicalized.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("p" when the denominator is 1).
std::string to_string(const Rational& value);

inline bool in_unit_interval(const Rational& value) { return sgn(value) >= 0 && value <= 1; }

/// 2^e for any signed exponent.
Rational pow2(long exponent);

/// 2^{-2^j}. Throws GuardError when 2^j would not fit in a few million bits.
Rational double_exp_neg(unsigned j);

/// Exact test of `value >= 2^{-2^j}` that never materializes the threshold
/// when it is too small to matter.
bool at_least_double_exp_neg(const Rational& value, unsigned j);

/// The schedule e_l = 2^{1-2^l}.
Rational schedule_default(unsigned level);

/// base^n for a natural n.
Rational power(const Rational& base, unsigned long n);

Rational sum(std::span<const Rational> values);

Rational max_of(std::span<const Rational> values);
Rational min_of(std::span<const Rational> values);

/// Number of bits of a positive big integer (floor(log2 x) + 1).
std::uint64_t bit_length(const BigInt& x);

bool is_power_of_two(const BigInt& x);

}  // namespace creature_lab
