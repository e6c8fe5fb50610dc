#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace creature_lab {

/// Base class of every error raised by the library.
class LabError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad JSON, letters outside an
/// alphabet, valuations outside [0,1], ...).
class InputError : public LabError {
public:
    using LabError::LabError;
};

/// An enumeration would exceed its configured size guard.
class GuardError : public LabError {
public:
    using LabError::LabError;
};

/// A stated hypothesis of a construction fails on the given data, so no
/// result can be produced (e.g. a cap on |g| is exceeded).
class HypothesisError : public LabError {
public:
    using LabError::LabError;
};

/// Size guards for every enumeration. Defaults follow the CLI defaults and
/// can be overridden through `CREATURE_LAB_GUARD`.
struct Guards {
    std::size_t max_pos = 4096;
    std::size_t max_sigma = 1'000'000;
    std::size_t max_rows = 1'000'000;
    std::size_t max_search = 1'000'000;
    std::size_t max_nodes = 1'000'000;

    /// Parses either a single number (applied to all caps) or a comma
    /// separated list `pos=..,sigma=..,rows=..,search=..,nodes=..`.
    static Guards parse(const std::string& text);
    static Guards parse(const std::string& text, Guards base);

    /// Defaults, overridden by the environment variable when it is set.
    static Guards from_environment();
};

inline void check_guard(std::size_t value, std::size_t cap, const char* what) {
    if (value > cap) {
        throw GuardError(std::string(what) + " count " + std::to_string(value) +
                         " exceeds guard " + std::to_string(cap));
    }
}

}  // namespace creature_lab
