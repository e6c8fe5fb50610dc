#pragma once

#include <cstdint>
#include <random>

#include "creature_lab/rational.hpp"

namespace creature_lab {

/// Seeded generator with platform-independent draws. Standard distributions
/// are implementation defined, so bounded draws are done by rejection on the
/// raw mt19937_64 stream to keep reports byte-identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Uniform dyadic-or-not rational i/den with 0 <= i <= den.
    Rational unit(std::uint64_t den) {
        Rational r(BigInt(static_cast<unsigned long>(below(den + 1))), BigInt(static_cast<unsigned long>(den)));
        r.canonicalize();
        return r;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace creature_lab
