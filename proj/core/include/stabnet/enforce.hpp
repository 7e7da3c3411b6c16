#pragma once

#include "stabnet/model.hpp"

#include <optional>
#include <span>

namespace stabnet {

/// One {0, c_j} slice of the weight decomposition. Heavy edges carry weight
/// c_j in the slice; heavy_usage m_a counts the heavy players using each
/// tree edge (0 off-tree and on light edges with no heavy users below).
struct Level {
    int index = 0;        // 1-based
    Rational increment;   // c_j > 0
    std::vector<char> heavy;       // per edge id
    std::vector<long> heavy_usage; // per edge id (tree edges only)
};

/// Splits the graph into levels c_1 = w(1), c_j = w(j) - w(j-1) over the
/// sorted distinct nonzero weights; an edge is heavy in level j iff its
/// weight is at least w(j). Requires (and asserts) that the tree is an MST,
/// which makes it an MST of every slice.
std::vector<Level> decompose(const Graph& graph, const SpanningTree& tree);

/// vc(a, y) = c_j * ln(m_a / (m_a - 1 + y/c_j)); 0 on light edges,
/// +infinity when m_a = 1 and y = 0.
double virtual_cost(const Level& level, EdgeId edge, double y);

/// Per-edge binary64 subsidies with the comparison tolerance used when
/// verifying them.
struct FloatSubsidy {
    std::vector<double> b; // per edge id
    double tolerance = 1e-9;
};

/// The per-level subsidy rule: full c_j below the cut, zero above it, and
/// the exp-formula on the cut edges so every root-to-leaf virtual cost is
/// capped at c_j. Spends exactly (heavy edges)/e * c_j up to rounding.
FloatSubsidy enforce_level(const Graph& graph, const SpanningTree& tree, const Level& level);

struct FractionalEnforcement {
    FloatSubsidy subsidies;
    double total = 0;
};

/// Sums the per-level subsidies (clamped into [0, w_a]); the total comes to
/// wgt(T)/e up to float error.
FractionalEnforcement enforce_fractional(const BroadcastGame& game, const SpanningTree& tree);

/// Exact rational view of float subsidies (clamped into [0, w_a]).
SubsidyAssignment to_assignment(const FloatSubsidy& subsidies, const Graph& graph);

struct IntegralResult {
    SubsidyAssignment subsidies; // integral flag set
    Rational total;
};

/// Exhaustive all-or-nothing search over the candidate edges (0 elsewhere).
/// Returns the cheapest enforcing assignment, ties broken by the
/// lexicographically smallest subsidized-edge id set; nullopt when no
/// subset of the candidates enforces the tree.
std::optional<IntegralResult> min_integral_subsidy_exact(
    const BroadcastGame& game, const SpanningTree& tree,
    std::span<const EdgeId> candidates, int cap = 24, int jobs = 1);

} // namespace stabnet
