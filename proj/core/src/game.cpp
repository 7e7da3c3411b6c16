#include "stabnet/game.hpp"

#include "stabnet/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <mutex>
#include <queue>
#include <random>

namespace stabnet {

Rational harmonic(long n) {
    if (n < 0) throw InvalidInput("harmonic(n) needs n >= 0");
    static std::vector<Rational> cache{Rational(0)};
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    while (static_cast<long>(cache.size()) <= n)
        cache.push_back(cache.back() + Rational(1, static_cast<unsigned long>(cache.size())));
    return cache[static_cast<std::size_t>(n)];
}

Rational player_cost(const GeneralGame& game, const State& state,
                     const SubsidyAssignment& subsidies, int player) {
    if (player < 0 || player >= game.player_count())
        throw InvalidInput("player index out of range");
    Rational cost = 0;
    for (EdgeId e : state.path(player)) {
        const Edge& ed = game.graph.edge(e);
        cost += (ed.w - subsidies.at(e)) / state.usage(e);
    }
    return cost;
}

Rational rosenthal_potential(const GeneralGame& game, const State& state,
                             const SubsidyAssignment& subsidies) {
    Rational phi = 0;
    for (const Edge& ed : game.graph.edges()) {
        long users = state.usage(ed.id);
        if (users > 0) phi += (ed.w - subsidies.at(ed.id)) * harmonic(users);
    }
    return phi;
}

namespace {

// Dijkstra over exact rationals. Returns per-node distances from source.
template <class WeightFn>
std::vector<std::optional<Rational>> exact_dijkstra(const Graph& graph, const WeightFn& weight,
                                                    NodeId source) {
    std::vector<std::optional<Rational>> dist(static_cast<std::size_t>(graph.node_count()));
    std::vector<char> done(static_cast<std::size_t>(graph.node_count()), 0);
    using Item = std::pair<Rational, NodeId>;
    auto cmp = [](const Item& a, const Item& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second > b.second;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
    dist[static_cast<std::size_t>(source)] = Rational(0);
    heap.push({Rational(0), source});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(v)]) continue;
        done[static_cast<std::size_t>(v)] = 1;
        for (EdgeId e : graph.incident(v)) {
            NodeId w = graph.edge(e).other(v);
            if (done[static_cast<std::size_t>(w)]) continue;
            Rational nd = d + weight(e);
            auto& dw = dist[static_cast<std::size_t>(w)];
            if (!dw || nd < *dw) {
                dw = nd;
                heap.push({nd, w});
            }
        }
    }
    return dist;
}

// Lexicographically smallest edge-id sequence among simple shortest paths.
// DFS over the shortest-path edge set, trying edge ids in ascending order;
// the first complete path found is the lex-min one.
template <class WeightFn>
std::vector<EdgeId> lex_min_shortest_path(const Graph& graph, const WeightFn& weight,
                                          NodeId source, NodeId sink,
                                          const std::vector<std::optional<Rational>>& dist) {
    std::vector<char> visited(static_cast<std::size_t>(graph.node_count()), 0);
    std::vector<EdgeId> path;
    // frames: (node, cursor into the incident list, which is id-sorted)
    std::vector<std::pair<NodeId, std::size_t>> stack;
    visited[static_cast<std::size_t>(source)] = 1;
    stack.push_back({source, 0});
    while (!stack.empty()) {
        auto& [v, idx] = stack.back();
        if (v == sink) return path;
        const auto inc = graph.incident(v);
        bool advanced = false;
        while (idx < inc.size()) {
            EdgeId e = inc[idx++];
            NodeId w = graph.edge(e).other(v);
            if (visited[static_cast<std::size_t>(w)]) continue;
            const auto& dv = dist[static_cast<std::size_t>(v)];
            const auto& dw = dist[static_cast<std::size_t>(w)];
            if (!dv || !dw) continue;
            if (*dv + weight(e) != *dw) continue;
            visited[static_cast<std::size_t>(w)] = 1;
            path.push_back(e);
            stack.push_back({w, 0});
            advanced = true;
            break;
        }
        if (!advanced) {
            stack.pop_back();
            if (!stack.empty()) {
                visited[static_cast<std::size_t>(v)] = 0;
                path.pop_back();
            }
        }
    }
    throw InvalidInput("no path between the player's pair"); // unreachable on connected graphs
}

// Reduced weight seen by `player` when adding edge e to her strategy:
// (w_e - b_e) / (n_e(T) + 1 - n^i_e(T)).
struct ReducedWeight {
    const GeneralGame& game;
    const State& state;
    const SubsidyAssignment& subsidies;
    int player;

    Rational operator()(EdgeId e) const {
        const Edge& ed = game.graph.edge(e);
        long denom = state.usage(e) + 1 - state.player_uses(player, e);
        return (ed.w - subsidies.at(e)) / denom;
    }
};

} // namespace

BestResponse best_response(const GeneralGame& game, const State& state,
                           const SubsidyAssignment& subsidies, int player) {
    if (player < 0 || player >= game.player_count())
        throw InvalidInput("player index out of range");
    const auto& pair = game.pairs[static_cast<std::size_t>(player)];
    if (pair.source == pair.sink) return {{}, Rational(0)};
    const ReducedWeight weight{game, state, subsidies, player};
    auto dist = exact_dijkstra(game.graph, weight, pair.source);
    const auto& d = dist[static_cast<std::size_t>(pair.sink)];
    if (!d) throw InvalidInput("player's destination is unreachable");
    auto path = lex_min_shortest_path(game.graph, weight, pair.source, pair.sink, dist);
    return {std::move(path), *d};
}

Verdict is_equilibrium_general(const GeneralGame& game, const State& state,
                               const SubsidyAssignment& subsidies, const Rational& slack) {
    for (int i = 0; i < game.player_count(); ++i) {
        Rational current = player_cost(game, state, subsidies, i);
        const auto& pair = game.pairs[static_cast<std::size_t>(i)];
        if (pair.source == pair.sink) continue;
        const ReducedWeight weight{game, state, subsidies, i};
        auto dist = exact_dijkstra(game.graph, weight, pair.source);
        const auto& best = dist[static_cast<std::size_t>(pair.sink)];
        if (!best) throw InvalidInput("player's destination is unreachable");
        if (current - *best > slack) {
            Violation v;
            v.player = i;
            v.player_node = pair.source;
            v.path = lex_min_shortest_path(game.graph, weight, pair.source, pair.sink, dist);
            v.gain = current - *best;
            return {false, std::move(v)};
        }
    }
    return {};
}

State initial_state(const GeneralGame& game) {
    std::vector<std::vector<EdgeId>> paths;
    auto solo = [&](EdgeId e) { return game.graph.edge(e).w; };
    for (const auto& pair : game.pairs) {
        if (pair.source == pair.sink) {
            paths.emplace_back();
            continue;
        }
        auto dist = exact_dijkstra(game.graph, solo, pair.source);
        if (!dist[static_cast<std::size_t>(pair.sink)])
            throw InvalidInput("player's destination is unreachable");
        paths.push_back(lex_min_shortest_path(game.graph, solo, pair.source, pair.sink, dist));
    }
    return State::from_paths(game, std::move(paths));
}

Verdict is_equilibrium_broadcast(const BroadcastGame& game, const SpanningTree& tree,
                                 const SubsidyAssignment& subsidies, const Rational& slack) {
    const Graph& graph = game.graph;
    if (tree.root() != game.root) throw InvalidInput("tree is rooted elsewhere");

    // Cost of u's tree path with denominators n_a (the path owner's view).
    auto cost_to_root = [&](NodeId u) {
        Rational c = 0;
        while (u != game.root) {
            EdgeId e = tree.parent_edge(u);
            c += (graph.edge(e).w - subsidies.at(e)) / tree.usage(e);
            u = tree.parent(u);
        }
        return c;
    };

    for (const Edge& e : graph.edges()) {
        if (tree.contains(e.id)) continue;
        for (auto [u, v] : {std::pair<NodeId, NodeId>{e.u, e.v}, {e.v, e.u}}) {
            if (u == game.root) continue;
            // Deviation for player u: edge e (used by her alone), then v's
            // tree path. Below the u-v LCA the denominators grow by one;
            // above it u already uses those edges, so they stay n_a.
            Rational lhs = cost_to_root(u);
            Rational rhs = e.w - subsidies.at(e.id);
            NodeId a = u;
            NodeId b = v;
            while (tree.depth(b) > tree.depth(a)) {
                EdgeId pe = tree.parent_edge(b);
                rhs += (graph.edge(pe).w - subsidies.at(pe)) / (tree.usage(pe) + 1);
                b = tree.parent(b);
            }
            while (tree.depth(a) > tree.depth(b)) a = tree.parent(a);
            while (a != b) {
                EdgeId pe = tree.parent_edge(b);
                rhs += (graph.edge(pe).w - subsidies.at(pe)) / (tree.usage(pe) + 1);
                b = tree.parent(b);
                a = tree.parent(a);
            }
            rhs += cost_to_root(a); // shared suffix, denominators unchanged
            if (lhs - rhs > slack) {
                Violation viol;
                viol.player = game.player_of(u);
                viol.player_node = u;
                viol.path.push_back(e.id);
                auto rest = tree.path_to_root(v);
                viol.path.insert(viol.path.end(), rest.begin(), rest.end());
                viol.gain = lhs - rhs;
                return {false, std::move(viol)};
            }
        }
    }
    return {};
}

std::string verdict_to_json(const Verdict& verdict, const Graph& graph) {
    nlohmann::ordered_json j;
    j["ok"] = verdict.ok;
    if (!verdict.ok && verdict.violation) {
        const auto& v = *verdict.violation;
        j["player"] = graph.label(v.player_node);
        j["gain"] = rat_str(v.gain);
        j["path"] = v.path;
    }
    return j.dump() + "\n";
}

DynamicsResult best_response_dynamics(const GeneralGame& game, State initial,
                                      const SubsidyAssignment& subsidies,
                                      OrderPolicy policy, std::uint64_t seed,
                                      int max_rounds) {
    DynamicsResult result;
    result.state = std::move(initial);
    result.potential_trace.push_back(rosenthal_potential(game, result.state, subsidies));
    std::mt19937_64 rng(seed);
    std::vector<int> order(static_cast<std::size_t>(game.player_count()));
    for (int i = 0; i < game.player_count(); ++i) order[static_cast<std::size_t>(i)] = i;

    for (int round = 0; round < max_rounds; ++round) {
        if (policy == OrderPolicy::random_permutation)
            std::shuffle(order.begin(), order.end(), rng);
        bool moved = false;
        for (int player : order) {
            Rational current = player_cost(game, result.state, subsidies, player);
            BestResponse br = best_response(game, result.state, subsidies, player);
            if (br.cost < current) {
                result.state.set_path(player, std::move(br.path));
                result.potential_trace.push_back(
                    rosenthal_potential(game, result.state, subsidies));
                ++result.moves;
                moved = true;
            }
        }
        ++result.rounds;
        if (!moved) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace stabnet
