#include "creature_lab/functional_set.hpp"

#include <algorithm>
#include <string>

#include "creature_lab/errors.hpp"

namespace creature_lab {

Rational FunctionalRow::apply(std::span<const Rational> r) const {
    Rational total = 0;
    if (weight.empty()) {
        for (std::uint32_t i : index) total += r[i];
    } else {
        for (std::size_t j = 0; j < index.size(); ++j) total += weight[j] * r[index[j]];
    }
    total *= scale;
    return total;
}

FunctionalSet::FunctionalSet(std::size_t width, std::vector<FunctionalRow> rows)
    : width_(width), rows_(std::move(rows)) {
    if (rows_.empty()) throw InputError("a functional set needs at least one row");
    for (const auto& row : rows_) {
        if (!row.weight.empty() && row.weight.size() != row.index.size()) {
            throw InputError("functional row weight/index length mismatch");
        }
        for (std::uint32_t i : row.index) {
            if (i >= width_) throw InputError("functional row index " + std::to_string(i) + " out of range");
        }
    }
}

Rational FunctionalSet::evaluate(std::span<const Rational> r) const {
    if (r.size() != width_) throw InputError("valuation length does not match the functional set");
    Rational best = rows_.front().apply(r);
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        Rational v = rows_[i].apply(r);
        if (v < best) best = v;
    }
    return best;
}

Rational FunctionalSet::evaluate_parallel(std::span<const Rational> r) const {
    if (r.size() != width_) throw InputError("valuation length does not match the functional set");
    std::vector<Rational> values(rows_.size());
    const auto n = static_cast<std::ptrdiff_t>(rows_.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = rows_[static_cast<std::size_t>(i)].apply(r);
    return *std::min_element(values.begin(), values.end());
}

std::size_t FunctionalSet::argmin(std::span<const Rational> r) const {
    if (r.size() != width_) throw InputError("valuation length does not match the functional set");
    std::size_t best_row = 0;
    Rational best = rows_.front().apply(r);
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        Rational v = rows_[i].apply(r);
        if (v < best) {
            best = v;
            best_row = i;
        }
    }
    return best_row;
}

std::vector<Rational> FunctionalSet::dense_row(std::size_t row) const {
    std::vector<Rational> out(width_, Rational(0));
    const auto& r = rows_.at(row);
    for (std::size_t j = 0; j < r.index.size(); ++j) {
        out[r.index[j]] += r.weight.empty() ? r.scale : r.scale * r.weight[j];
    }
    return out;
}

bool FunctionalSet::coefficients_nonnegative() const {
    for (const auto& row : rows_) {
        if (row.index.empty()) continue;
        if (sgn(row.scale) < 0) return false;
        for (const auto& w : row.weight) {
            if (sgn(w) < 0) return false;
        }
    }
    return true;
}

}  // namespace creature_lab
