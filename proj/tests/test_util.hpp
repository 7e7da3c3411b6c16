#pragma once

// Shared deterministic instance generators for the test suites.

#include "stabnet/game.hpp"
#include "stabnet/model.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace testutil {

using namespace stabnet;

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}
    long next(long lo, long hi) { // inclusive
        return std::uniform_int_distribution<long>(lo, hi)(engine);
    }
    bool chance(double p) { return std::uniform_real_distribution<>(0, 1)(engine) < p; }
};

/// Nonnegative rational with numerator <= max_num and denominator <= 12.
inline Rational random_weight(Rng& rng, long max_num = 6, double zero_chance = 0.1) {
    if (rng.chance(zero_chance)) return 0;
    Rational w(rng.next(1, max_num), rng.next(1, 12));
    w.canonicalize();
    return w;
}

/// Connected broadcast game on 2..max_nodes nodes with random rational
/// weights: a random attachment tree plus a few extra edges.
inline BroadcastGame random_broadcast_game(Rng& rng, int max_nodes = 10) {
    const int n = static_cast<int>(rng.next(2, max_nodes));
    std::vector<std::string> labels{"r"};
    for (int i = 1; i < n; ++i) labels.push_back("v" + std::to_string(i));
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) {
        Edge e;
        e.id = static_cast<EdgeId>(edges.size());
        e.u = static_cast<NodeId>(rng.next(0, i - 1));
        e.v = i;
        e.w = random_weight(rng);
        edges.push_back(std::move(e));
    }
    const long extra = rng.next(0, n);
    for (long k = 0; k < extra; ++k) {
        NodeId u = static_cast<NodeId>(rng.next(0, n - 1));
        NodeId v = static_cast<NodeId>(rng.next(0, n - 1));
        if (u == v) continue;
        Edge e;
        e.id = static_cast<EdgeId>(edges.size());
        e.u = u;
        e.v = v;
        e.w = random_weight(rng);
        edges.push_back(std::move(e));
    }
    return BroadcastGame{Graph(std::move(labels), std::move(edges)), 0};
}

/// Uniform-ish random spanning tree: Kruskal over a shuffled edge order.
inline SpanningTree random_spanning_tree(const Graph& graph, NodeId root, Rng& rng) {
    std::vector<EdgeId> order(static_cast<std::size_t>(graph.edge_count()));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine);
    std::vector<int> comp(static_cast<std::size_t>(graph.node_count()));
    std::iota(comp.begin(), comp.end(), 0);
    std::vector<EdgeId> chosen;
    for (EdgeId e : order) {
        int a = comp[static_cast<std::size_t>(graph.edge(e).u)];
        int b = comp[static_cast<std::size_t>(graph.edge(e).v)];
        if (a == b) continue;
        for (auto& c : comp)
            if (c == a) c = b;
        chosen.push_back(e);
    }
    return SpanningTree(graph, root, std::move(chosen));
}

/// Valid random subsidies: each edge gets w * k/12 with probability 1/3.
inline SubsidyAssignment random_subsidies(const Graph& graph, Rng& rng) {
    SubsidyAssignment b;
    for (const Edge& e : graph.edges()) {
        if (e.w == 0 || !rng.chance(1.0 / 3)) continue;
        b.set(e.id, e.w * Rational(rng.next(0, 12), 12));
    }
    return b;
}

/// Random simple source->sink path (shuffled DFS); used to build random
/// deviations.
inline std::vector<EdgeId> random_simple_path(const Graph& graph, NodeId source, NodeId sink,
                                              Rng& rng) {
    std::vector<char> visited(static_cast<std::size_t>(graph.node_count()), 0);
    std::vector<EdgeId> path;
    auto dfs = [&](auto&& self, NodeId at) -> bool {
        if (at == sink) return true;
        visited[static_cast<std::size_t>(at)] = 1;
        std::vector<EdgeId> inc(graph.incident(at).begin(), graph.incident(at).end());
        std::shuffle(inc.begin(), inc.end(), rng.engine);
        for (EdgeId e : inc) {
            NodeId w = graph.edge(e).other(at);
            if (visited[static_cast<std::size_t>(w)]) continue;
            path.push_back(e);
            if (self(self, w)) return true;
            path.pop_back();
        }
        visited[static_cast<std::size_t>(at)] = 0;
        return false;
    };
    dfs(dfs, source);
    return path;
}

} // namespace testutil
