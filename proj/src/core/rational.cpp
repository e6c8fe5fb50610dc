#include "creature_lab/rational.hpp"

#include <algorithm>
#include <cctype>

#include "creature_lab/errors.hpp"

namespace creature_lab {

namespace {

constexpr unsigned kMaxDoubleExponent = 26;

bool valid_integer_text(std::string_view text) {
    if (text.empty()) return false;
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) return false;
    return std::all_of(text.begin() + static_cast<std::ptrdiff_t>(i), text.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_integer_text(num) || !valid_integer_text(den) || den[0] == '-' || den[0] == '+') {
        throw InputError("malformed rational \"" + std::string(text) + "\"");
    }
    BigInt p(std::string(num[0] == '+' ? num.substr(1) : num));
    BigInt q{std::string(den)};
    if (q == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

Rational pow2(long exponent) {
    BigInt one = 1;
    BigInt p;
    if (exponent >= 0) {
        mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
        return Rational(p);
    }
    mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
    return Rational(BigInt(1), p);
}

Rational double_exp_neg(unsigned j) {
    if (j > kMaxDoubleExponent) {
        throw GuardError("2^-2^" + std::to_string(j) + " is too large to materialize");
    }
    return pow2(-(1L << j));
}

bool at_least_double_exp_neg(const Rational& value, unsigned j) {
    if (sgn(value) <= 0) return false;
    // value = p/q >= 2^-E  <=>  p * 2^E >= q; with p >= 1 this holds as soon
    // as 2^E > q, i.e. E >= bitlen(q).
    const std::uint64_t qbits = bit_length(value.get_den());
    if (j >= 63 || (1ULL << j) >= qbits) return true;
    return value >= double_exp_neg(j);
}

Rational schedule_default(unsigned level) {
    if (level > kMaxDoubleExponent) {
        throw GuardError("schedule e_" + std::to_string(level) + " is too large to materialize");
    }
    return pow2(1L - (1L << level));
}

Rational power(const Rational& base, unsigned long n) {
    Rational result = 1;
    Rational b = base;
    while (n > 0) {
        if (n & 1UL) result *= b;
        n >>= 1;
        if (n > 0) b *= b;
    }
    return result;
}

Rational sum(std::span<const Rational> values) {
    Rational total = 0;
    for (const auto& v : values) total += v;
    return total;
}

Rational max_of(std::span<const Rational> values) {
    Rational best = 0;  // sup(empty) = 0
    bool first = true;
    for (const auto& v : values) {
        if (first || v > best) best = v;
        first = false;
    }
    return best;
}

Rational min_of(std::span<const Rational> values) {
    Rational best = 0;
    bool first = true;
    for (const auto& v : values) {
        if (first || v < best) best = v;
        first = false;
    }
    return best;
}

std::uint64_t bit_length(const BigInt& x) {
    if (x == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

bool is_power_of_two(const BigInt& x) {
    if (x <= 0) return false;
    return mpz_popcount(x.get_mpz_t()) == 1;
}

}  // namespace creature_lab
