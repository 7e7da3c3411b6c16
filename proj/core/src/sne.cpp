#include "stabnet/sne.hpp"

#include "stabnet/errors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace stabnet {

namespace {

SubsidyAssignment extract_subsidies(const std::vector<EdgeId>& subsidy_edges,
                                    const std::vector<Rational>& assignment) {
    SubsidyAssignment b;
    for (std::size_t i = 0; i < subsidy_edges.size(); ++i) b.set(subsidy_edges[i], assignment[i]);
    return b;
}

} // namespace

SneLp build_lp_broadcast(const BroadcastGame& game, const SpanningTree& tree) {
    const Graph& graph = game.graph;
    if (tree.root() != game.root) throw InvalidInput("tree is rooted elsewhere");

    SneLp out;
    std::vector<int> var_of(static_cast<std::size_t>(graph.edge_count()), -1);
    for (EdgeId e : tree.edges()) {
        var_of[static_cast<std::size_t>(e)] =
            out.lp.add_variable(Rational(0), graph.edge(e).w, Rational(1));
        out.subsidy_edges.push_back(e);
    }

    // For b on tree edges, player u deviating through non-tree edge e to v:
    //   sum_{a in T_u} (w_a - b_a)/n_a <= w_e + sum_{a in T_v} (w_a - b_a)/d_a
    // with d_a = n_a + 1 below the u-v LCA and d_a = n_a above it. Collect
    // per-variable coefficients; shared-suffix terms cancel.
    for (const Edge& e : graph.edges()) {
        if (tree.contains(e.id)) continue;
        for (auto [u, v] : {std::pair<NodeId, NodeId>{e.u, e.v}, {e.v, e.u}}) {
            if (u == game.root) continue;
            std::map<int, Rational> coeff; // variable -> coefficient
            Rational rhs = e.w;
            NodeId a = u;
            while (a != game.root) {
                EdgeId pe = tree.parent_edge(a);
                coeff[var_of[static_cast<std::size_t>(pe)]] -= Rational(1) / tree.usage(pe);
                rhs -= graph.edge(pe).w / tree.usage(pe);
                a = tree.parent(a);
            }
            // climb v to the LCA with denominators n_a + 1
            NodeId x = u;
            NodeId y = v;
            while (tree.depth(y) > tree.depth(x)) {
                EdgeId pe = tree.parent_edge(y);
                coeff[var_of[static_cast<std::size_t>(pe)]] += Rational(1) / (tree.usage(pe) + 1);
                rhs += graph.edge(pe).w / (tree.usage(pe) + 1);
                y = tree.parent(y);
            }
            while (tree.depth(x) > tree.depth(y)) x = tree.parent(x);
            while (x != y) {
                EdgeId pe = tree.parent_edge(y);
                coeff[var_of[static_cast<std::size_t>(pe)]] += Rational(1) / (tree.usage(pe) + 1);
                rhs += graph.edge(pe).w / (tree.usage(pe) + 1);
                y = tree.parent(y);
                x = tree.parent(x);
            }
            // shared suffix from the LCA upward: n^u_a = 1, denominators n_a,
            // identical on both sides -- contributes nothing.
            std::vector<std::pair<int, Rational>> terms;
            for (auto& [var, c] : coeff)
                if (c != 0) terms.push_back({var, std::move(c)});
            out.lp.add_row(terms, Relation::le, std::move(rhs));
        }
    }
    return out;
}

SneLp build_lp_general(const GeneralGame& game, const State& state) {
    const Graph& graph = game.graph;
    const int n = game.player_count();

    SneLp out;
    std::vector<int> var_of(static_cast<std::size_t>(graph.edge_count()), -1);
    for (const Edge& e : graph.edges()) {
        if (state.usage(e.id) == 0) continue; // only established edges carry variables
        var_of[static_cast<std::size_t>(e.id)] =
            out.lp.add_variable(Rational(0), e.w, Rational(1));
        out.subsidy_edges.push_back(e.id);
    }

    // pi_i(v): lower bound on player i's shortest-path distance from s_i.
    std::vector<std::vector<int>> pi(static_cast<std::size_t>(n),
                                     std::vector<int>(static_cast<std::size_t>(graph.node_count())));
    for (int i = 0; i < n; ++i) {
        for (NodeId v = 0; v < graph.node_count(); ++v) {
            bool fixed = (v == game.pairs[static_cast<std::size_t>(i)].source);
            pi[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] =
                out.lp.add_variable(Rational(0), fixed ? std::optional<Rational>(Rational(0)) : std::nullopt,
                                    Rational(0));
        }
    }

    for (int i = 0; i < n; ++i) {
        // pi_i(v) <= pi_i(u) + (w_e - b_e)/d_{i,e}, both orientations.
        for (const Edge& e : graph.edges()) {
            const long d = state.usage(e.id) + 1 - state.player_uses(i, e.id);
            const int bvar = var_of[static_cast<std::size_t>(e.id)];
            for (auto [u, v] : {std::pair<NodeId, NodeId>{e.u, e.v}, {e.v, e.u}}) {
                std::vector<std::pair<int, Rational>> terms;
                terms.push_back({pi[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)], Rational(1)});
                terms.push_back({pi[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)], Rational(-1)});
                if (bvar >= 0) terms.push_back({bvar, Rational(1) / d});
                out.lp.add_row(terms, Relation::le, e.w / d);
            }
        }
        // pi_i(t_i) >= co_i(T;b), i.e.
        // pi_i(t_i) + sum_{a in T_i} b_a/n_a >= sum_{a in T_i} w_a/n_a.
        std::vector<std::pair<int, Rational>> terms;
        terms.push_back({pi[static_cast<std::size_t>(i)]
                           [static_cast<std::size_t>(game.pairs[static_cast<std::size_t>(i)].sink)],
                         Rational(1)});
        Rational rhs = 0;
        for (EdgeId a : state.path(i)) {
            terms.push_back({var_of[static_cast<std::size_t>(a)], Rational(1) / state.usage(a)});
            rhs += graph.edge(a).w / state.usage(a);
        }
        out.lp.add_row(terms, Relation::ge, std::move(rhs));
    }
    return out;
}

SneResult solve_sne_rowgen(const GeneralGame& game, const State& state, int iteration_cap) {
    const Graph& graph = game.graph;
    if (iteration_cap <= 0)
        iteration_cap = 10 * std::max(1, game.player_count()) * std::max(1, graph.edge_count());

    SneLp pool;
    std::vector<int> var_of(static_cast<std::size_t>(graph.edge_count()), -1);
    for (const Edge& e : graph.edges()) {
        if (state.usage(e.id) == 0) continue;
        var_of[static_cast<std::size_t>(e.id)] =
            pool.lp.add_variable(Rational(0), e.w, Rational(1));
        pool.subsidy_edges.push_back(e.id);
    }

    SneResult result;
    for (int iter = 1; iter <= iteration_cap; ++iter) {
        LpOutcome outcome = solve(pool.lp);
        if (outcome.status != LpStatus::optimal)
            throw std::logic_error("enforcement LP must stay feasible (b = w is a solution)");
        SubsidyAssignment candidate =
            extract_subsidies(pool.subsidy_edges, outcome.optimal->assignment);

        bool violated = false;
        for (int i = 0; i < game.player_count(); ++i) {
            Rational current = player_cost(game, state, candidate, i);
            BestResponse br = best_response(game, state, candidate, i);
            if (br.cost >= current) continue;
            violated = true;
            // sum_{a in T_i} (w_a-b_a)/n_a <= sum_{a in p} (w_a-b_a)/d_{i,a}
            std::map<int, Rational> coeff;
            Rational rhs = 0;
            for (EdgeId a : state.path(i)) {
                coeff[var_of[static_cast<std::size_t>(a)]] -= Rational(1) / state.usage(a);
                rhs -= graph.edge(a).w / state.usage(a);
            }
            for (EdgeId a : br.path) {
                const long d = state.usage(a) + 1 - state.player_uses(i, a);
                const int bvar = var_of[static_cast<std::size_t>(a)];
                if (bvar >= 0) coeff[bvar] += Rational(1) / d;
                rhs += graph.edge(a).w / d;
            }
            std::vector<std::pair<int, Rational>> terms;
            for (auto& [var, c] : coeff)
                if (c != 0) terms.push_back({var, std::move(c)});
            pool.lp.add_row(terms, Relation::le, std::move(rhs));
        }
        if (!violated) {
            result.subsidies = std::move(candidate);
            result.total = outcome.optimal->value;
            result.iterations = iter;
            return result;
        }
    }
    throw CapExceeded("row generation did not settle within " +
                      std::to_string(iteration_cap) + " iterations");
}

namespace {

SneResult solve_direct(const SneLp& built) {
    LpOutcome outcome = solve(built.lp);
    if (outcome.status != LpStatus::optimal)
        throw std::logic_error("enforcement LP must stay feasible (b = w is a solution)");
    SneResult result;
    result.subsidies = extract_subsidies(built.subsidy_edges, outcome.optimal->assignment);
    result.total = outcome.optimal->value;
    return result;
}

} // namespace

SneResult min_subsidy(const BroadcastGame& game, const SpanningTree& tree, SneMethod method) {
    SneResult result;
    switch (method) {
    case SneMethod::lp3:
        result = solve_direct(build_lp_broadcast(game, tree));
        break;
    case SneMethod::lp2:
        result = solve_direct(build_lp_general(as_general(game), State::from_tree(game, tree)));
        break;
    case SneMethod::rowgen:
        result = solve_sne_rowgen(as_general(game), State::from_tree(game, tree));
        break;
    }
    Verdict verdict = is_equilibrium_broadcast(game, tree, result.subsidies);
    if (!verdict.ok) throw std::logic_error("optimal subsidies failed the equilibrium check");
    return result;
}

SneResult min_subsidy(const GeneralGame& game, const State& state, SneMethod method) {
    SneResult result;
    switch (method) {
    case SneMethod::lp3:
        throw InvalidInput("the broadcast LP needs a broadcast game and a spanning tree");
    case SneMethod::lp2:
        result = solve_direct(build_lp_general(game, state));
        break;
    case SneMethod::rowgen:
        result = solve_sne_rowgen(game, state);
        break;
    }
    Verdict verdict = is_equilibrium_general(game, state, result.subsidies);
    if (!verdict.ok) throw std::logic_error("optimal subsidies failed the equilibrium check");
    return result;
}

} // namespace stabnet
