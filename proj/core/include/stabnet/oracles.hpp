#pragma once

#include "stabnet/model.hpp"

#include <functional>
#include <optional>

namespace stabnet {

/// Visits every spanning tree exactly once (contraction-deletion, edges
/// branched in ascending id order, contract before delete). The visitor
/// receives the tree's edge ids in ascending order and may return false to
/// stop early. Returns the number of trees visited; throws CapExceeded when
/// a tree beyond `cap` is found.
long enumerate_spanning_trees(const Graph& graph, long cap,
                              const std::function<bool(std::span<const EdgeId>)>& visit);

std::vector<std::vector<EdgeId>> all_spanning_trees(const Graph& graph, long cap);

/// Kirchhoff matrix-tree count (exact).
Integer spanning_tree_count(const Graph& graph);

struct BestEquilibrium {
    std::vector<EdgeId> tree_edges;
    Rational weight;
};

/// Minimum-weight spanning tree that is an equilibrium at b = 0, by full
/// enumeration. nullopt when no spanning tree passes.
std::optional<BestEquilibrium> best_equilibrium(const BroadcastGame& game, long cap = 1000000);

/// Best-equilibrium weight divided by the MST weight.
Rational price_of_stability(const BroadcastGame& game, long cap = 1000000);

/// Exhaustive search over subsidies on tree edges restricted to the grid
/// {0, 1/D, 2/D, ...} united with {w_a}. Upper-bounds the LP optimum and
/// matches it whenever the optimum lies on the grid.
Rational grid_min_subsidy(const BroadcastGame& game, const SpanningTree& tree,
                          int denominator, long cap = 1000000);

} // namespace stabnet
