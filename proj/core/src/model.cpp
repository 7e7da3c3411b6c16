#include "stabnet/model.hpp"

#include "stabnet/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace stabnet {

using nlohmann::json;
using nlohmann::ordered_json;

// --- Graph ---------------------------------------------------------------

Graph::Graph(std::vector<std::string> labels, std::vector<Edge> edges)
    : labels_(std::move(labels)) {
    const int n = static_cast<int>(labels_.size());
    if (n == 0) throw InvalidInput("graph needs at least one node");
    {
        std::vector<std::string> sorted = labels_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidInput("duplicate node label");
    }
    edges_.resize(edges.size());
    std::vector<char> seen(edges.size(), 0);
    for (auto& e : edges) {
        if (e.id < 0 || e.id >= static_cast<int>(edges.size()) || seen[static_cast<std::size_t>(e.id)])
            throw InvalidInput("edge ids must be dense 0..E-1");
        seen[static_cast<std::size_t>(e.id)] = 1;
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw InvalidInput("edge endpoint out of range");
        if (e.u == e.v)
            throw InvalidInput("self-loop on node '" + labels_[static_cast<std::size_t>(e.u)] + "'");
        if (e.w < 0)
            throw InvalidInput("negative weight on edge " + std::to_string(e.id));
        edges_[static_cast<std::size_t>(e.id)] = std::move(e);
    }
    incident_.resize(static_cast<std::size_t>(n));
    for (const auto& e : edges_) {
        incident_[static_cast<std::size_t>(e.u)].push_back(e.id);
        incident_[static_cast<std::size_t>(e.v)].push_back(e.id);
    }
}

std::optional<NodeId> Graph::find_node(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<NodeId>(i);
    return std::nullopt;
}

std::span<const EdgeId> Graph::incident(NodeId v) const {
    return incident_.at(static_cast<std::size_t>(v));
}

bool Graph::connected() const {
    if (labels_.empty()) return false;
    std::vector<char> seen(labels_.size(), 0);
    std::queue<NodeId> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop();
        for (EdgeId e : incident(v)) {
            NodeId w = edges_[static_cast<std::size_t>(e)].other(v);
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                q.push(w);
            }
        }
    }
    return reached == node_count();
}

// --- games ----------------------------------------------------------------

std::vector<NodeId> BroadcastGame::players() const {
    std::vector<NodeId> out;
    out.reserve(static_cast<std::size_t>(graph.node_count()) - 1);
    for (NodeId v = 0; v < graph.node_count(); ++v)
        if (v != root) out.push_back(v);
    return out;
}

int BroadcastGame::player_of(NodeId v) const {
    if (v == root) return -1;
    return v < root ? v : v - 1;
}

const Graph& game_graph(const Game& game) {
    return std::visit([](const auto& g) -> const Graph& { return g.graph; }, game);
}

GeneralGame as_general(const BroadcastGame& game) {
    GeneralGame g;
    g.graph = game.graph;
    for (NodeId v : game.players()) g.pairs.push_back({v, game.root});
    return g;
}

// --- SpanningTree ----------------------------------------------------------

SpanningTree::SpanningTree(const Graph& graph, NodeId root, std::vector<EdgeId> edges)
    : root_(root), edges_(std::move(edges)) {
    const int n = graph.node_count();
    if (root < 0 || root >= n) throw InvalidInput("root out of range");
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw InvalidInput("duplicate edge id in tree");
    if (static_cast<int>(edges_.size()) != n - 1)
        throw InvalidInput("tree must have exactly |V|-1 edges");
    in_tree_.assign(static_cast<std::size_t>(graph.edge_count()), 0);
    for (EdgeId e : edges_) {
        if (e < 0 || e >= graph.edge_count()) throw InvalidInput("unknown edge id in tree");
        in_tree_[static_cast<std::size_t>(e)] = 1;
    }

    std::vector<std::vector<EdgeId>> adj(static_cast<std::size_t>(n));
    for (EdgeId e : edges_) {
        const Edge& ed = graph.edge(e);
        adj[static_cast<std::size_t>(ed.u)].push_back(e);
        adj[static_cast<std::size_t>(ed.v)].push_back(e);
    }
    parent_.assign(static_cast<std::size_t>(n), -1);
    parent_edge_.assign(static_cast<std::size_t>(n), -1);
    depth_.assign(static_cast<std::size_t>(n), -1);
    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(n));
    depth_[static_cast<std::size_t>(root)] = 0;
    order.push_back(root);
    for (std::size_t head = 0; head < order.size(); ++head) {
        NodeId v = order[head];
        for (EdgeId e : adj[static_cast<std::size_t>(v)]) {
            NodeId w = graph.edge(e).other(v);
            if (depth_[static_cast<std::size_t>(w)] >= 0) continue;
            depth_[static_cast<std::size_t>(w)] = depth_[static_cast<std::size_t>(v)] + 1;
            parent_[static_cast<std::size_t>(w)] = v;
            parent_edge_[static_cast<std::size_t>(w)] = e;
            order.push_back(w);
        }
    }
    if (static_cast<int>(order.size()) != n)
        throw InvalidInput("tree does not span the graph");

    subtree_.assign(static_cast<std::size_t>(n), 1);
    for (std::size_t i = order.size(); i-- > 1;) {
        NodeId v = order[i];
        subtree_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])] +=
            subtree_[static_cast<std::size_t>(v)];
    }
    usage_.assign(static_cast<std::size_t>(graph.edge_count()), 0);
    for (NodeId v = 0; v < n; ++v)
        if (v != root)
            usage_[static_cast<std::size_t>(parent_edge_[static_cast<std::size_t>(v)])] =
                subtree_[static_cast<std::size_t>(v)];
}

std::vector<EdgeId> SpanningTree::path_to_root(NodeId v) const {
    std::vector<EdgeId> out;
    while (v != root_) {
        out.push_back(parent_edge(v));
        v = parent(v);
    }
    return out;
}

// --- SubsidyAssignment ------------------------------------------------------

void SubsidyAssignment::set(EdgeId e, Rational value) {
    if (value == 0)
        b_.erase(e);
    else
        b_[e] = std::move(value);
}

const Rational& SubsidyAssignment::at(EdgeId e) const {
    static const Rational zero = 0;
    auto it = b_.find(e);
    return it == b_.end() ? zero : it->second;
}

Rational SubsidyAssignment::total() const {
    Rational t = 0;
    for (const auto& [e, v] : b_) t += v;
    return t;
}

void SubsidyAssignment::validate(const Graph& graph) const {
    for (const auto& [e, v] : b_) {
        if (e < 0 || e >= graph.edge_count())
            throw InvalidInput("subsidy on unknown edge id " + std::to_string(e));
        const Rational& w = graph.edge(e).w;
        if (v < 0 || v > w)
            throw InvalidInput("subsidy out of [0,w] on edge " + std::to_string(e));
        if (integral_ && v != 0 && v != w)
            throw InvalidInput("integral subsidy must be 0 or w on edge " + std::to_string(e));
    }
}

// --- State -------------------------------------------------------------------

namespace {

void check_simple_path(const Graph& graph, const std::vector<EdgeId>& path,
                       NodeId source, NodeId sink) {
    std::vector<char> visited(static_cast<std::size_t>(graph.node_count()), 0);
    NodeId at = source;
    visited[static_cast<std::size_t>(at)] = 1;
    for (EdgeId e : path) {
        if (e < 0 || e >= graph.edge_count()) throw InvalidInput("unknown edge id in path");
        const Edge& ed = graph.edge(e);
        if (!ed.touches(at)) throw InvalidInput("path is not contiguous");
        at = ed.other(at);
        if (visited[static_cast<std::size_t>(at)]) throw InvalidInput("path is not simple");
        visited[static_cast<std::size_t>(at)] = 1;
    }
    if (at != sink) throw InvalidInput("path does not reach the player's destination");
}

} // namespace

State State::from_paths(const GeneralGame& game, std::vector<std::vector<EdgeId>> paths) {
    if (static_cast<int>(paths.size()) != game.player_count())
        throw InvalidInput("one path per player required");
    State s;
    s.usage_.assign(static_cast<std::size_t>(game.graph.edge_count()), 0);
    for (int i = 0; i < game.player_count(); ++i) {
        const auto& pair = game.pairs[static_cast<std::size_t>(i)];
        if (pair.source != pair.sink)
            check_simple_path(game.graph, paths[static_cast<std::size_t>(i)], pair.source, pair.sink);
        else if (!paths[static_cast<std::size_t>(i)].empty())
            throw InvalidInput("trivial pair must use the empty path");
        for (EdgeId e : paths[static_cast<std::size_t>(i)]) ++s.usage_[static_cast<std::size_t>(e)];
    }
    s.paths_ = std::move(paths);
    s.sorted_paths_ = s.paths_;
    for (auto& p : s.sorted_paths_) std::sort(p.begin(), p.end());
    return s;
}

State State::from_tree(const BroadcastGame& game, const SpanningTree& tree) {
    std::vector<std::vector<EdgeId>> paths;
    paths.reserve(static_cast<std::size_t>(game.graph.node_count()) - 1);
    for (NodeId v : game.players()) paths.push_back(tree.path_to_root(v));
    GeneralGame general = as_general(game);
    return from_paths(general, std::move(paths));
}

int State::player_uses(int player, EdgeId e) const {
    const auto& p = sorted_paths_.at(static_cast<std::size_t>(player));
    return std::binary_search(p.begin(), p.end(), e) ? 1 : 0;
}

void State::set_path(int player, std::vector<EdgeId> path) {
    auto& old = paths_.at(static_cast<std::size_t>(player));
    for (EdgeId e : old) --usage_[static_cast<std::size_t>(e)];
    for (EdgeId e : path) ++usage_[static_cast<std::size_t>(e)];
    old = std::move(path);
    sorted_paths_[static_cast<std::size_t>(player)] = old;
    auto& sp = sorted_paths_[static_cast<std::size_t>(player)];
    std::sort(sp.begin(), sp.end());
}

// --- MST and related ---------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool join(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

} // namespace

SpanningTree minimum_spanning_tree(const Graph& graph, NodeId root) {
    std::vector<EdgeId> ids(static_cast<std::size_t>(graph.edge_count()));
    std::iota(ids.begin(), ids.end(), 0);
    std::sort(ids.begin(), ids.end(), [&](EdgeId a, EdgeId b) {
        const Rational& wa = graph.edge(a).w;
        const Rational& wb = graph.edge(b).w;
        if (wa != wb) return wa < wb;
        return a < b;
    });
    UnionFind uf(graph.node_count());
    std::vector<EdgeId> chosen;
    chosen.reserve(static_cast<std::size_t>(graph.node_count()) - 1);
    for (EdgeId e : ids)
        if (uf.join(graph.edge(e).u, graph.edge(e).v)) chosen.push_back(e);
    if (static_cast<int>(chosen.size()) != graph.node_count() - 1)
        throw InvalidInput("graph is disconnected");
    return SpanningTree(graph, root, std::move(chosen));
}

bool is_mst(const Graph& graph, const SpanningTree& tree) {
    for (const Edge& e : graph.edges()) {
        if (tree.contains(e.id)) continue;
        // max tree-edge weight on the u-v tree path, via LCA walk
        NodeId a = e.u;
        NodeId b = e.v;
        const Rational* max_w = nullptr;
        auto step = [&](NodeId& x) {
            const Rational& w = graph.edge(tree.parent_edge(x)).w;
            if (max_w == nullptr || w > *max_w) max_w = &w;
            x = tree.parent(x);
        };
        while (tree.depth(a) > tree.depth(b)) step(a);
        while (tree.depth(b) > tree.depth(a)) step(b);
        while (a != b) {
            step(a);
            step(b);
        }
        if (max_w != nullptr && e.w < *max_w) return false;
    }
    return true;
}

Rational wgt(const Graph& graph, std::span<const EdgeId> edge_ids) {
    Rational total = 0;
    for (EdgeId e : edge_ids) {
        if (e < 0 || e >= graph.edge_count())
            throw InvalidInput("unknown edge id " + std::to_string(e));
        total += graph.edge(e).w;
    }
    return total;
}

// --- serialization -------------------------------------------------------------

namespace {

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON");
    return j;
}

Rational weight_from_json(const json& jw) {
    if (!jw.is_string()) throw ParseError("weights must be rational strings");
    Rational w = rat_parse(jw.get<std::string>());
    return w;
}

} // namespace

Game load_game(const std::string& json_text) {
    json j = parse_json(json_text);
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw ParseError("game JSON needs 'nodes' and 'edges'");
    const bool broadcast = j.contains("root");
    const bool general = j.contains("pairs");
    if (broadcast == general)
        throw ParseError("game JSON needs exactly one of 'root' or 'pairs'");

    std::vector<std::string> labels;
    for (const auto& n : j.at("nodes")) {
        if (!n.is_string()) throw ParseError("node labels must be strings");
        labels.push_back(n.get<std::string>());
    }
    auto find = [&](const std::string& label) -> NodeId {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<NodeId>(i);
        throw ParseError("unknown node label '" + label + "'");
    };

    std::vector<Edge> edges;
    for (const auto& je : j.at("edges")) {
        Edge e;
        e.id = je.at("id").get<int>();
        e.u = find(je.at("u").get<std::string>());
        e.v = find(je.at("v").get<std::string>());
        e.w = weight_from_json(je.at("w"));
        if (e.w < 0) throw InvalidInput("negative weight on edge " + std::to_string(e.id));
        edges.push_back(std::move(e));
    }

    Graph graph(std::move(labels), std::move(edges));
    if (!graph.connected()) throw InvalidInput("graph is disconnected");

    if (broadcast) {
        BroadcastGame g;
        g.root = find(j.at("root").get<std::string>());
        g.graph = std::move(graph);
        return g;
    }
    GeneralGame g;
    g.graph = std::move(graph);
    for (const auto& jp : j.at("pairs")) {
        if (!jp.is_array() || jp.size() != 2) throw ParseError("pairs must be [s,t] arrays");
        SourceSink p;
        p.source = find(jp.at(0).get<std::string>());
        p.sink = find(jp.at(1).get<std::string>());
        g.pairs.push_back(p);
    }
    if (g.pairs.empty()) throw ParseError("general game needs at least one pair");
    return g;
}

std::string save_game(const Game& game) {
    const Graph& graph = game_graph(game);
    ordered_json j;
    j["nodes"] = graph.labels();
    if (const auto* b = std::get_if<BroadcastGame>(&game))
        j["root"] = graph.label(b->root);
    ordered_json edges = ordered_json::array();
    for (const Edge& e : graph.edges()) {
        ordered_json je;
        je["id"] = e.id;
        je["u"] = graph.label(e.u);
        je["v"] = graph.label(e.v);
        je["w"] = rat_str(e.w);
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    if (const auto* g = std::get_if<GeneralGame>(&game)) {
        ordered_json pairs = ordered_json::array();
        for (const auto& p : g->pairs)
            pairs.push_back({graph.label(p.source), graph.label(p.sink)});
        j["pairs"] = std::move(pairs);
    }
    return j.dump(2) + "\n";
}

std::vector<EdgeId> load_tree(const std::string& json_text) {
    json j = parse_json(json_text);
    if (!j.is_object() || !j.contains("edges") || !j.at("edges").is_array())
        throw ParseError("tree JSON needs an 'edges' array");
    std::vector<EdgeId> ids;
    for (const auto& e : j.at("edges")) ids.push_back(e.get<int>());
    return ids;
}

std::string save_tree(std::span<const EdgeId> edge_ids) {
    std::vector<EdgeId> sorted(edge_ids.begin(), edge_ids.end());
    std::sort(sorted.begin(), sorted.end());
    ordered_json j;
    j["edges"] = sorted;
    return j.dump(2) + "\n";
}

SubsidyAssignment load_subsidies(const std::string& json_text) {
    json j = parse_json(json_text);
    if (!j.is_object() || !j.contains("b"))
        throw ParseError("subsidy JSON needs a 'b' object");
    SubsidyAssignment s(j.value("integral", false));
    for (const auto& [key, val] : j.at("b").items()) {
        std::size_t pos = 0;
        int id = std::stoi(key, &pos);
        if (pos != key.size()) throw ParseError("subsidy keys must be edge ids");
        if (!val.is_string()) throw ParseError("subsidy values must be rational strings");
        s.set(id, rat_parse(val.get<std::string>()));
    }
    return s;
}

std::string save_subsidies(const SubsidyAssignment& subsidies) {
    ordered_json b = ordered_json::object();
    for (const auto& [e, v] : subsidies.entries()) b[std::to_string(e)] = rat_str(v);
    ordered_json j;
    j["integral"] = subsidies.integral();
    j["b"] = std::move(b);
    return j.dump(2) + "\n";
}

std::string to_dot(const Graph& graph, const SpanningTree* tree,
                   const SubsidyAssignment* subsidies, std::optional<NodeId> root) {
    std::ostringstream out;
    out << "graph G {\n";
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        out << "  n" << v << " [label=\"" << graph.label(v) << "\"";
        if (root && *root == v) out << ", shape=doublecircle";
        out << "];\n";
    }
    for (const Edge& e : graph.edges()) {
        out << "  n" << e.u << " -- n" << e.v << " [label=\"" << rat_str(e.w);
        if (subsidies != nullptr && subsidies->at(e.id) != 0)
            out << " b=" << rat_str(subsidies->at(e.id));
        out << "\"";
        if (tree != nullptr && tree->contains(e.id)) out << ", style=bold";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace stabnet
