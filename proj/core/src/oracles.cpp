#include "stabnet/oracles.hpp"

#include "stabnet/errors.hpp"
#include "stabnet/game.hpp"

#include <algorithm>
#include <numeric>

namespace stabnet {

namespace {

struct TreeEnumerator {
    const Graph& graph;
    long cap;
    const std::function<bool(std::span<const EdgeId>)>& visit;
    long count = 0;
    bool stopped = false;
    std::vector<EdgeId> chosen;

    // comp: node -> component id; merging proceeds along ascending edge ids.
    void recurse(std::vector<int> comp, int components, int idx) {
        if (stopped) return;
        if (components == 1) {
            if (count == cap)
                throw CapExceeded("spanning tree cap " + std::to_string(cap) +
                                  " exceeded (at least " + std::to_string(cap + 1) + " trees)");
            ++count;
            if (!visit(chosen)) stopped = true;
            return;
        }
        // skip edges that are self-loops under the current contraction
        int e = idx;
        while (e < graph.edge_count() &&
               comp[static_cast<std::size_t>(graph.edge(e).u)] ==
                   comp[static_cast<std::size_t>(graph.edge(e).v)])
            ++e;
        if (e == graph.edge_count()) return;

        // branch 1: edge e joins the tree (contract)
        {
            std::vector<int> merged = comp;
            const int from = merged[static_cast<std::size_t>(graph.edge(e).u)];
            const int to = merged[static_cast<std::size_t>(graph.edge(e).v)];
            for (auto& c : merged)
                if (c == from) c = to;
            chosen.push_back(e);
            recurse(std::move(merged), components - 1, e + 1);
            chosen.pop_back();
            if (stopped) return;
        }

        // branch 2: edge e is deleted; only viable if the remaining edges
        // still connect every component
        {
            std::vector<int> probe = comp;
            int remaining = components;
            for (int f = e + 1; f < graph.edge_count() && remaining > 1; ++f) {
                const int a = probe[static_cast<std::size_t>(graph.edge(f).u)];
                const int b = probe[static_cast<std::size_t>(graph.edge(f).v)];
                if (a == b) continue;
                for (auto& c : probe)
                    if (c == a) c = b;
                --remaining;
            }
            if (remaining == 1) recurse(std::move(comp), components, e + 1);
        }
    }
};

} // namespace

long enumerate_spanning_trees(const Graph& graph, long cap,
                              const std::function<bool(std::span<const EdgeId>)>& visit) {
    if (!graph.connected()) throw InvalidInput("graph is disconnected");
    TreeEnumerator en{graph, cap, visit};
    std::vector<int> comp(static_cast<std::size_t>(graph.node_count()));
    std::iota(comp.begin(), comp.end(), 0);
    en.recurse(std::move(comp), graph.node_count(), 0);
    return en.count;
}

std::vector<std::vector<EdgeId>> all_spanning_trees(const Graph& graph, long cap) {
    std::vector<std::vector<EdgeId>> out;
    enumerate_spanning_trees(graph, cap, [&](std::span<const EdgeId> t) {
        out.emplace_back(t.begin(), t.end());
        return true;
    });
    return out;
}

Integer spanning_tree_count(const Graph& graph) {
    const int n = graph.node_count();
    if (n == 1) return 1;
    // Laplacian with row/column 0 deleted; rational elimination determinant.
    std::vector<std::vector<Rational>> a(static_cast<std::size_t>(n - 1),
                                         std::vector<Rational>(static_cast<std::size_t>(n - 1), Rational(0)));
    for (const Edge& e : graph.edges()) {
        if (e.u > 0) a[static_cast<std::size_t>(e.u - 1)][static_cast<std::size_t>(e.u - 1)] += 1;
        if (e.v > 0) a[static_cast<std::size_t>(e.v - 1)][static_cast<std::size_t>(e.v - 1)] += 1;
        if (e.u > 0 && e.v > 0) {
            a[static_cast<std::size_t>(e.u - 1)][static_cast<std::size_t>(e.v - 1)] -= 1;
            a[static_cast<std::size_t>(e.v - 1)][static_cast<std::size_t>(e.u - 1)] -= 1;
        }
    }
    Rational det = 1;
    for (int col = 0; col < n - 1; ++col) {
        int pivot = -1;
        for (int row = col; row < n - 1; ++row)
            if (a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0) return 0;
        if (pivot != col) {
            std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(col)]);
            det = -det;
        }
        const Rational p = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        det *= p;
        for (int row = col + 1; row < n - 1; ++row) {
            const Rational f = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] / p;
            if (f == 0) continue;
            for (int j = col; j < n - 1; ++j)
                a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -=
                    f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
        }
    }
    if (det.get_den() != 1) return 0; // cannot happen: integer matrix
    return det.get_num();
}

std::optional<BestEquilibrium> best_equilibrium(const BroadcastGame& game, long cap) {
    const SubsidyAssignment none;
    std::optional<BestEquilibrium> best;
    enumerate_spanning_trees(game.graph, cap, [&](std::span<const EdgeId> edges) {
        Rational weight = wgt(game.graph, edges);
        if (best && weight >= best->weight) return true;
        SpanningTree tree(game.graph, game.root, {edges.begin(), edges.end()});
        if (is_equilibrium_broadcast(game, tree, none).ok)
            best = BestEquilibrium{{edges.begin(), edges.end()}, std::move(weight)};
        return true;
    });
    return best;
}

Rational price_of_stability(const BroadcastGame& game, long cap) {
    auto best = best_equilibrium(game, cap);
    if (!best) throw InvalidInput("no spanning tree is an equilibrium at b = 0");
    SpanningTree mst = minimum_spanning_tree(game.graph, game.root);
    return best->weight / wgt(game.graph, mst.edges());
}

Rational grid_min_subsidy(const BroadcastGame& game, const SpanningTree& tree,
                          int denominator, long cap) {
    if (denominator < 1 || denominator > 12)
        throw InvalidInput("grid denominator must be in 1..12");
    if (static_cast<int>(tree.edges().size()) > 4)
        throw InvalidInput("grid search is limited to trees with at most 4 edges");

    std::vector<EdgeId> ids(tree.edges());
    std::vector<std::vector<Rational>> values;
    long points = 1;
    for (EdgeId e : ids) {
        const Rational& w = game.graph.edge(e).w;
        std::vector<Rational> vals;
        for (Rational v = 0; v < w; v += Rational(1, denominator)) vals.push_back(v);
        vals.push_back(w);
        points *= static_cast<long>(vals.size());
        if (points > cap) throw CapExceeded("grid cap exceeded");
        values.push_back(std::move(vals));
    }

    std::optional<Rational> best;
    SubsidyAssignment b;
    auto dfs = [&](auto&& self, std::size_t i, const Rational& cost) -> void {
        if (best && cost >= *best) return;
        if (i == ids.size()) {
            if (is_equilibrium_broadcast(game, tree, b).ok) best = cost;
            return;
        }
        for (const Rational& v : values[i]) {
            b.set(ids[i], v);
            self(self, i + 1, cost + v);
        }
        b.set(ids[i], Rational(0));
    };
    dfs(dfs, 0, Rational(0));
    if (!best) throw std::logic_error("full subsidies always enforce; grid search cannot fail");
    return *best;
}

} // namespace stabnet
