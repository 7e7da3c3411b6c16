#pragma once

#include "stabnet/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace stabnet {

enum class Relation { le, ge, eq };

struct LpRow {
    std::vector<Rational> coeffs; // dense, one per variable
    Relation rel = Relation::le;
    Rational rhs;
};

/// Minimize objective . x subject to rows and per-variable bounds.
struct LinearProgram {
    int num_vars = 0;
    std::vector<Rational> objective;
    std::vector<LpRow> rows;
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    int add_variable(std::optional<Rational> lo, std::optional<Rational> hi,
                     Rational objective_coeff = Rational(0));
    /// Accumulates sparse terms into a dense row.
    void add_row(const std::vector<std::pair<int, Rational>>& terms, Relation rel,
                 Rational rhs);
};

struct LpOptimal {
    std::vector<Rational> assignment;
    Rational value;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpOutcome {
    LpStatus status = LpStatus::infeasible;
    std::optional<LpOptimal> optimal;
};

/// Exact two-phase dense simplex with Bland's anti-cycling rule. The
/// returned optimal point satisfies every row and bound exactly (verified
/// before returning).
LpOutcome solve(const LinearProgram& lp);

} // namespace stabnet
