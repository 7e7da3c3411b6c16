#include "stabnet/enforce.hpp"

#include "stabnet/errors.hpp"
#include "stabnet/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace stabnet {

std::vector<Level> decompose(const Graph& graph, const SpanningTree& tree) {
    if (!is_mst(graph, tree)) throw InvalidInput("tree is not a minimum spanning tree");

    std::vector<Rational> weights;
    for (const Edge& e : graph.edges())
        if (e.w > 0) weights.push_back(e.w);
    std::sort(weights.begin(), weights.end());
    weights.erase(std::unique(weights.begin(), weights.end()), weights.end());

    // node order by descending depth, for bottom-up heavy-player counting
    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(graph.node_count()));
    for (NodeId v = 0; v < graph.node_count(); ++v)
        if (v != tree.root()) order.push_back(v);
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return tree.depth(a) > tree.depth(b); });

    std::vector<Level> levels;
    Rational previous = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        Level level;
        level.index = static_cast<int>(j) + 1;
        level.increment = weights[j] - previous;
        previous = weights[j];
        level.heavy.assign(static_cast<std::size_t>(graph.edge_count()), 0);
        for (const Edge& e : graph.edges())
            if (e.w >= weights[j]) level.heavy[static_cast<std::size_t>(e.id)] = 1;

        // m_a: heavy players in the subtree below each tree edge
        level.heavy_usage.assign(static_cast<std::size_t>(graph.edge_count()), 0);
        std::vector<long> below(static_cast<std::size_t>(graph.node_count()), 0);
        for (NodeId v : order) {
            EdgeId pe = tree.parent_edge(v);
            long count = below[static_cast<std::size_t>(v)];
            if (level.heavy[static_cast<std::size_t>(pe)]) ++count; // v itself is a heavy player
            level.heavy_usage[static_cast<std::size_t>(pe)] = count;
            below[static_cast<std::size_t>(tree.parent(v))] += count;
        }
        levels.push_back(std::move(level));
    }
    return levels;
}

double virtual_cost(const Level& level, EdgeId edge, double y) {
    if (edge < 0 || edge >= static_cast<EdgeId>(level.heavy.size()))
        throw InvalidInput("unknown edge id");
    if (!level.heavy[static_cast<std::size_t>(edge)]) return 0.0;
    const long m = level.heavy_usage[static_cast<std::size_t>(edge)];
    if (m == 0) throw InvalidInput("virtual cost is defined on tree edges only");
    const double c = level.increment.get_d();
    if (y < -1e-12 || y > c + 1e-12) throw InvalidInput("subsidy outside [0, c_j]");
    y = std::clamp(y, 0.0, c);
    if (m == 1 && y == 0.0) return std::numeric_limits<double>::infinity();
    return c * std::log(static_cast<double>(m) / (static_cast<double>(m) - 1.0 + y / c));
}

FloatSubsidy enforce_level(const Graph& graph, const SpanningTree& tree, const Level& level) {
    FloatSubsidy out;
    out.b.assign(static_cast<std::size_t>(graph.edge_count()), 0.0);
    const double c = level.increment.get_d();

    // prefix virtual cost (at y = 0) from the root down to each node
    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(graph.node_count()));
    for (NodeId v = 0; v < graph.node_count(); ++v)
        if (v != tree.root()) order.push_back(v);
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return tree.depth(a) < tree.depth(b); });
    std::vector<double> prefix(static_cast<std::size_t>(graph.node_count()), 0.0);

    for (NodeId v : order) {
        const EdgeId pe = tree.parent_edge(v);
        const double above = prefix[static_cast<std::size_t>(tree.parent(v))];
        const double vc0 = virtual_cost(level, pe, 0.0);
        prefix[static_cast<std::size_t>(v)] = above + vc0;
        if (!level.heavy[static_cast<std::size_t>(pe)]) continue;
        const long m = level.heavy_usage[static_cast<std::size_t>(pe)];
        if (above >= c) {
            out.b[static_cast<std::size_t>(pe)] = c; // below the cut: fully subsidized
        } else if (above + vc0 >= c) {
            // cut edge: chosen so prefix + vc(a, b) == c exactly
            double b = c * (1.0 - static_cast<double>(m) * (1.0 - std::exp(above / c - 1.0)));
            out.b[static_cast<std::size_t>(pe)] = std::clamp(b, 0.0, c);
        }
    }
    return out;
}

FractionalEnforcement enforce_fractional(const BroadcastGame& game, const SpanningTree& tree) {
    const Graph& graph = game.graph;
    FractionalEnforcement out;
    out.subsidies.b.assign(static_cast<std::size_t>(graph.edge_count()), 0.0);
    for (const Level& level : decompose(graph, tree)) {
        FloatSubsidy part = enforce_level(graph, tree, level);
        for (std::size_t i = 0; i < part.b.size(); ++i) out.subsidies.b[i] += part.b[i];
    }
    for (const Edge& e : graph.edges()) {
        double& b = out.subsidies.b[static_cast<std::size_t>(e.id)];
        b = std::clamp(b, 0.0, e.w.get_d());
        out.total += b;
    }
    return out;
}

SubsidyAssignment to_assignment(const FloatSubsidy& subsidies, const Graph& graph) {
    SubsidyAssignment out;
    for (const Edge& e : graph.edges()) {
        double b = subsidies.b.at(static_cast<std::size_t>(e.id));
        if (b <= 0) continue;
        Rational r = rat_from_double(b);
        if (r > e.w) r = e.w;
        out.set(e.id, std::move(r));
    }
    return out;
}

namespace {

struct IntegralSearch {
    const BroadcastGame& game;
    const SpanningTree& tree;
    const std::vector<EdgeId>& candidates;
    std::optional<IntegralResult> best;

    bool lex_smaller(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

    void consider(const std::vector<EdgeId>& chosen, const Rational& cost) {
        SubsidyAssignment b(true);
        for (EdgeId e : chosen) b.set(e, game.graph.edge(e).w);
        if (!is_equilibrium_broadcast(game, tree, b).ok) return;
        if (!best || cost < best->total ||
            (cost == best->total && lex_smaller(chosen, sorted_edges(best->subsidies)))) {
            best = IntegralResult{std::move(b), cost};
        }
    }

    static std::vector<EdgeId> sorted_edges(const SubsidyAssignment& b) {
        std::vector<EdgeId> out;
        for (const auto& [e, v] : b.entries()) out.push_back(e);
        return out; // map iteration is already ascending
    }

    void dfs(std::size_t i, std::vector<EdgeId>& chosen, const Rational& cost) {
        if (best && cost > best->total) return;
        if (i == candidates.size()) {
            consider(chosen, cost);
            return;
        }
        chosen.push_back(candidates[i]);
        dfs(i + 1, chosen, cost + game.graph.edge(candidates[i]).w);
        chosen.pop_back();
        dfs(i + 1, chosen, cost);
    }

    // run over all suffix subsets with the first `t` candidates fixed to `mask`
    void run_prefix(unsigned long mask, std::size_t t) {
        std::vector<EdgeId> chosen;
        Rational cost = 0;
        for (std::size_t i = 0; i < t; ++i) {
            if (mask >> i & 1U) {
                chosen.push_back(candidates[i]);
                cost += game.graph.edge(candidates[i]).w;
            }
        }
        dfs(t, chosen, cost);
    }
};

} // namespace

std::optional<IntegralResult> min_integral_subsidy_exact(
    const BroadcastGame& game, const SpanningTree& tree,
    std::span<const EdgeId> candidates, int cap, int jobs) {
    std::vector<EdgeId> ids(candidates.begin(), candidates.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (EdgeId e : ids)
        if (e < 0 || e >= game.graph.edge_count()) throw InvalidInput("unknown candidate edge id");
    if (static_cast<int>(ids.size()) > cap)
        throw CapExceeded("candidate set of " + std::to_string(ids.size()) +
                          " edges exceeds the cap " + std::to_string(cap));

    if (jobs <= 1 || ids.size() < 4) {
        IntegralSearch search{game, tree, ids};
        std::vector<EdgeId> chosen;
        search.dfs(0, chosen, Rational(0));
        return std::move(search.best);
    }

    // parallel split on the first t candidates; deterministic min-merge
    std::size_t t = 1;
    while ((1UL << t) < static_cast<unsigned long>(jobs) * 2 && t + 2 < ids.size()) ++t;
    const unsigned long prefixes = 1UL << t;
    std::vector<IntegralSearch> searches;
    searches.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) searches.push_back(IntegralSearch{game, tree, ids});
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) {
        threads.emplace_back([&, j] {
            for (unsigned long mask = static_cast<unsigned long>(j); mask < prefixes;
                 mask += static_cast<unsigned long>(jobs))
                searches[static_cast<std::size_t>(j)].run_prefix(mask, t);
        });
    }
    for (auto& th : threads) th.join();

    std::optional<IntegralResult> best;
    for (auto& s : searches) {
        if (!s.best) continue;
        if (!best || s.best->total < best->total ||
            (s.best->total == best->total &&
             std::lexicographical_compare(
                 IntegralSearch::sorted_edges(s.best->subsidies).begin(),
                 IntegralSearch::sorted_edges(s.best->subsidies).end(),
                 IntegralSearch::sorted_edges(best->subsidies).begin(),
                 IntegralSearch::sorted_edges(best->subsidies).end())))
            best = std::move(s.best);
    }
    return best;
}

} // namespace stabnet
