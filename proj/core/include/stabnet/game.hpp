#pragma once

#include "stabnet/model.hpp"

#include <cstdint>
#include <optional>

namespace stabnet {

/// H_n = sum_{k=1..n} 1/k, H_0 = 0. Exact; memoized.
Rational harmonic(long n);

/// co_i(T;b) = sum over the player's path of (w_a - b_a)/n_a(T).
Rational player_cost(const GeneralGame& game, const State& state,
                     const SubsidyAssignment& subsidies, int player);

/// sum_a (w_a - b_a) * H_{n_a(T)} over established edges. Unilateral
/// deviations change this by exactly the deviator's cost change.
Rational rosenthal_potential(const GeneralGame& game, const State& state,
                             const SubsidyAssignment& subsidies);

struct BestResponse {
    std::vector<EdgeId> path; // lexicographically smallest edge-id sequence
    Rational cost;
};

/// Cheapest deviation for one player: a shortest s_i -> t_i path under the
/// reduced weights (w_a - b_a)/(n_a(T) + 1 - n^i_a(T)).
BestResponse best_response(const GeneralGame& game, const State& state,
                           const SubsidyAssignment& subsidies, int player);

struct Violation {
    int player = -1;
    NodeId player_node = -1; // deviator's source node
    std::vector<EdgeId> path;
    Rational gain;
};

struct Verdict {
    bool ok = true;
    std::optional<Violation> violation;
};

/// ok iff no player can strictly gain more than `slack` by deviating.
/// Ties never count as deviations.
Verdict is_equilibrium_general(const GeneralGame& game, const State& state,
                               const SubsidyAssignment& subsidies,
                               const Rational& slack = Rational(0));

/// Tree-state equilibrium test for broadcast games: one constraint per
/// non-tree edge and non-root endpoint, comparing the endpoint's tree-path
/// cost against deviating through that edge. Agrees with the general check
/// on tree states.
Verdict is_equilibrium_broadcast(const BroadcastGame& game, const SpanningTree& tree,
                                 const SubsidyAssignment& subsidies,
                                 const Rational& slack = Rational(0));

std::string verdict_to_json(const Verdict& verdict, const Graph& graph);

/// Each player on her solo-cheapest route (raw weights, lex-min ties):
/// a deterministic starting profile for the dynamics.
State initial_state(const GeneralGame& game);

enum class OrderPolicy { round_robin, random_permutation };

struct DynamicsResult {
    State state;
    bool converged = false;
    int rounds = 0;
    int moves = 0;
    std::vector<Rational> potential_trace; // initial value, then one per move
};

/// Iterated strictly-improving best responses. The potential decreases at
/// every move, so this terminates at an equilibrium unless the round cap is
/// hit first (in which case converged=false and the last state is returned).
DynamicsResult best_response_dynamics(const GeneralGame& game, State initial,
                                      const SubsidyAssignment& subsidies,
                                      OrderPolicy policy, std::uint64_t seed,
                                      int max_rounds);

} // namespace stabnet
