#pragma once

#include "stabnet/game.hpp"
#include "stabnet/model.hpp"
#include "stabnet/simplex.hpp"

namespace stabnet {

/// An enforcement LP plus the mapping from its leading variables to the
/// target edges they subsidize (variable i <-> subsidy_edges[i]).
struct SneLp {
    LinearProgram lp;
    std::vector<EdgeId> subsidy_edges;
};

/// Broadcast formulation: one subsidy variable per tree edge, one
/// constraint per (non-root endpoint, incident non-tree edge) pair.
SneLp build_lp_broadcast(const BroadcastGame& game, const SpanningTree& tree);

/// General formulation: subsidy variables on established edges plus
/// shortest-path potentials pi_i(v) that simulate the separation oracle.
SneLp build_lp_general(const GeneralGame& game, const State& state);

enum class SneMethod { lp3, lp2, rowgen };

struct SneResult {
    SubsidyAssignment subsidies;
    Rational total;
    int iterations = 0; // row-generation rounds (0 for direct LPs)
};

/// Row generation on the path formulation: solve with the current
/// constraint pool, ask each player's best response for a violated path
/// constraint, repeat. iteration_cap 0 means the default 10*n*|E|.
SneResult solve_sne_rowgen(const GeneralGame& game, const State& state,
                           int iteration_cap = 0);

/// Minimum-cost fractional subsidies enforcing the target, by the chosen
/// method. The result is re-verified with the equilibrium check.
SneResult min_subsidy(const BroadcastGame& game, const SpanningTree& tree, SneMethod method);
SneResult min_subsidy(const GeneralGame& game, const State& state, SneMethod method);

} // namespace stabnet
