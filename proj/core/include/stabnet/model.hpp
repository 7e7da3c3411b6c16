#pragma once

#include "stabnet/rational.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stabnet {

using NodeId = int;
using EdgeId = int;

/// Undirected weighted edge. Parallel edges are allowed and distinguished
/// by id; self-loops and negative weights are rejected at construction.
struct Edge {
    EdgeId id = -1;
    NodeId u = -1;
    NodeId v = -1;
    Rational w;

    NodeId other(NodeId x) const { return x == u ? v : u; }
    bool touches(NodeId x) const { return x == u || x == v; }
};

class Graph {
  public:
    Graph() = default;
    /// Edge ids must be exactly 0..edges.size()-1 (any order on input).
    Graph(std::vector<std::string> labels, std::vector<Edge> edges);

    int node_count() const { return static_cast<int>(labels_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::string& label(NodeId v) const { return labels_.at(static_cast<std::size_t>(v)); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<NodeId> find_node(std::string_view label) const;
    const Edge& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const EdgeId> incident(NodeId v) const;
    bool connected() const;

  private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> incident_;
};

/// One player per non-root node, each connecting her node to the root.
struct BroadcastGame {
    Graph graph;
    NodeId root = 0;

    /// Player nodes in ascending node-id order; player index = position.
    std::vector<NodeId> players() const;
    int player_of(NodeId v) const; // index into players(); -1 for root
};

struct SourceSink {
    NodeId source = -1;
    NodeId sink = -1;
};

struct GeneralGame {
    Graph graph;
    std::vector<SourceSink> pairs;

    int player_count() const { return static_cast<int>(pairs.size()); }
};

using Game = std::variant<BroadcastGame, GeneralGame>;

const Graph& game_graph(const Game& game);

/// The broadcast game viewed as a general game (players in node order).
GeneralGame as_general(const BroadcastGame& game);

/// A rooted spanning tree with cached parent pointers, depths and per-edge
/// usage counts n_a(T) (the subtree size below each tree edge).
class SpanningTree {
  public:
    SpanningTree(const Graph& graph, NodeId root, std::vector<EdgeId> edges);

    const std::vector<EdgeId>& edges() const { return edges_; }
    bool contains(EdgeId e) const { return in_tree_.at(static_cast<std::size_t>(e)) != 0; }
    NodeId root() const { return root_; }
    NodeId parent(NodeId v) const { return parent_.at(static_cast<std::size_t>(v)); }
    EdgeId parent_edge(NodeId v) const { return parent_edge_.at(static_cast<std::size_t>(v)); }
    int depth(NodeId v) const { return depth_.at(static_cast<std::size_t>(v)); }
    long usage(EdgeId e) const { return usage_.at(static_cast<std::size_t>(e)); }
    long subtree_size(NodeId v) const { return subtree_.at(static_cast<std::size_t>(v)); }
    /// Edge ids from v up to the root, child-to-root order.
    std::vector<EdgeId> path_to_root(NodeId v) const;

  private:
    NodeId root_;
    std::vector<EdgeId> edges_;    // ascending
    std::vector<char> in_tree_;    // per edge id
    std::vector<NodeId> parent_;   // -1 at root
    std::vector<EdgeId> parent_edge_;
    std::vector<int> depth_;
    std::vector<long> subtree_;
    std::vector<long> usage_;      // per edge id; 0 off-tree
};

/// Edge id -> b_a with 0 <= b_a <= w_a; the integral flag restricts
/// values to {0, w_a}. Absent edges carry 0.
class SubsidyAssignment {
  public:
    SubsidyAssignment() = default;
    explicit SubsidyAssignment(bool integral) : integral_(integral) {}

    bool integral() const { return integral_; }
    void set(EdgeId e, Rational value);
    const Rational& at(EdgeId e) const;
    const std::map<EdgeId, Rational>& entries() const { return b_; }
    Rational total() const;
    /// Throws InvalidInput on out-of-range values or unknown edge ids.
    void validate(const Graph& graph) const;

  private:
    std::map<EdgeId, Rational> b_;
    bool integral_ = false;
};

/// A strategy profile of a general game: one simple s_i -> t_i path per
/// player, plus derived usage counts.
class State {
  public:
    static State from_paths(const GeneralGame& game, std::vector<std::vector<EdgeId>> paths);
    static State from_tree(const BroadcastGame& game, const SpanningTree& tree);

    int player_count() const { return static_cast<int>(paths_.size()); }
    const std::vector<EdgeId>& path(int player) const { return paths_.at(static_cast<std::size_t>(player)); }
    long usage(EdgeId e) const { return usage_.at(static_cast<std::size_t>(e)); }
    /// n^i_a(T): 1 if player i's path contains edge a.
    int player_uses(int player, EdgeId e) const;
    /// Replaces one player's path, updating usage counts.
    void set_path(int player, std::vector<EdgeId> path);
    const std::vector<long>& usage_counts() const { return usage_; }

  private:
    std::vector<std::vector<EdgeId>> paths_;
    std::vector<std::vector<EdgeId>> sorted_paths_;
    std::vector<long> usage_;
};

// --- core graph operations ---------------------------------------------

/// Kruskal with ties broken by ascending edge id; throws on disconnected
/// input. Deterministic across runs.
SpanningTree minimum_spanning_tree(const Graph& graph, NodeId root);

/// Cycle-exchange test: true iff no non-tree edge is lighter than the
/// heaviest tree edge on the path between its endpoints.
bool is_mst(const Graph& graph, const SpanningTree& tree);

Rational wgt(const Graph& graph, std::span<const EdgeId> edge_ids);

// --- serialization -------------------------------------------------------
//
// Game JSON:    {"nodes":[...],"root":"r","edges":[{"id":0,"u":"r","v":"a","w":"1"}]}
//               with "pairs":[["s","t"],...] instead of "root" for general games.
// Tree JSON:    {"edges":[0,1,2]}
// Subsidy JSON: {"integral":false,"b":{"0":"5/6"}}

Game load_game(const std::string& json_text);
std::string save_game(const Game& game);

std::vector<EdgeId> load_tree(const std::string& json_text);
std::string save_tree(std::span<const EdgeId> edge_ids);

SubsidyAssignment load_subsidies(const std::string& json_text);
std::string save_subsidies(const SubsidyAssignment& subsidies);

/// GraphViz export; tree edges are drawn bold, subsidies annotate labels.
std::string to_dot(const Graph& graph, const SpanningTree* tree = nullptr,
                   const SubsidyAssignment* subsidies = nullptr,
                   std::optional<NodeId> root = std::nullopt);

} // namespace stabnet
