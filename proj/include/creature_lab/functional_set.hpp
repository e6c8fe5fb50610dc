#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "creature_lab/rational.hpp"

namespace creature_lab {

/// One linear functional: coefficient of index[i] is scale * weight[i]
/// (weight empty means every listed index has weight 1). Unlisted indices
/// have coefficient 0.
struct FunctionalRow {
    Rational scale;
    std::vector<std::uint32_t> index;
    std::vector<Rational> weight;

    Rational apply(std::span<const Rational> r) const;
};

/// An averaging function given as the pointwise minimum of finitely many
/// nonnegative linear functionals on a vector of length `width`.
class FunctionalSet {
public:
    FunctionalSet() = default;
    FunctionalSet(std::size_t width, std::vector<FunctionalRow> rows);

    std::size_t width() const { return width_; }
    std::size_t row_count() const { return rows_.size(); }
    const std::vector<FunctionalRow>& rows() const { return rows_; }

    Rational evaluate(std::span<const Rational> r) const;
    /// Same value; rows are evaluated in an OpenMP loop.
    Rational evaluate_parallel(std::span<const Rational> r) const;
    /// First row attaining the minimum.
    std::size_t argmin(std::span<const Rational> r) const;

    std::vector<Rational> dense_row(std::size_t row) const;
    bool coefficients_nonnegative() const;

private:
    std::size_t width_ = 0;
    std::vector<FunctionalRow> rows_;
};

}  // namespace creature_lab
