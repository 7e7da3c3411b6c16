#pragma once

#include "stabnet/model.hpp"

#include <array>
#include <map>
#include <span>

namespace stabnet {

// --- bypass gadget ---------------------------------------------------------

struct BypassSpec {
    long kappa = 0;
    long ell = 0; // minimum positive integer with H_{kappa+ell} - H_kappa > 1
    NodeId connector = -1;
    EdgeId bypass_edge = -1;
};

struct BypassInstance {
    BroadcastGame game;
    SpanningTree tree; // basic path plus attached leaves
    BypassSpec spec;
};

/// Root, a basic path of ell unit edges ending at the connector, a bypass
/// edge of weight H_{kappa+ell} - H_kappa, and `attach_count` zero-weight
/// leaves on the connector.
BypassInstance gen_bypass(long kappa, long attach_count);

// --- bin-packing reduction ---------------------------------------------------

struct BinPackInstance {
    BroadcastGame game;
    long bins = 0;
    long capacity = 0;
    std::vector<long> sizes;
    long ell = 0;
    Rational mst_weight; // k*ell + 2n(H_{C+ell} - H_C)
    std::vector<NodeId> connectors;               // per bin
    std::vector<NodeId> centers;                  // per item
    std::vector<std::vector<EdgeId>> link_edges;  // [item][bin]
    std::vector<EdgeId> base_tree_edges;          // path + star edges (every MST)

    /// The minimum spanning tree matching an item->bin assignment.
    SpanningTree tree_for(std::span<const int> assignment) const;
};

/// Stars of size_i - 1 zero-weight leaves, one capacity-C bypass gadget per
/// bin, and a complete bipartite center-connector edge set of weight
/// 2(H_{C+ell} - H_C). Requires even sizes, even C >= max size, sum = k*C.
BinPackInstance gen_binpack(std::vector<long> sizes, long bins, long capacity);

// --- independent-set reduction ----------------------------------------------

enum class BranchType { a, b, c, d, e };

struct IndepSetInstance {
    BroadcastGame game;
    Rational delta;
    int h_node_count = 0;
    std::vector<std::pair<int, int>> h_edges;
    std::vector<NodeId> u_node;                  // per H node
    std::vector<NodeId> v_node;                  // per H edge
    std::vector<EdgeId> root_edge;               // per G node, -1 at root
    std::vector<std::array<EdgeId, 2>> link_edge; // per H edge: to its two endpoints

    /// Tree with a type-B branch per independent-set node and type-A
    /// branches everywhere else; weight 5n/2 - (1-delta)|I|.
    SpanningTree branch_tree(std::span<const int> independent_set) const;
    /// Tree with one type-C branch (h_node plus 1 or 2 of its incident
    /// V-nodes) and type-A branches elsewhere; never an equilibrium.
    SpanningTree type_c_tree(int h_node, int attach_count) const;
    /// Branch types of the given tree, one per root child (in node order).
    std::vector<BranchType> classify(const SpanningTree& tree) const;
};

/// Unit edges from every non-root node to the root; each H-edge node is
/// linked to its two endpoint nodes with weight (2+delta)/3, delta in
/// (0, 1/12]. H must be 3-regular.
IndepSetInstance gen_indepset(int h_node_count, std::vector<std::pair<int, int>> h_edges,
                              Rational delta);

// --- unit cycle ---------------------------------------------------------------

struct CycleInstance {
    BroadcastGame game;
    SpanningTree tree; // the path omitting one root edge
};

/// Cycle of n+1 unit edges through the root.
CycleInstance gen_cycle(long n);

// --- all-or-nothing path family ------------------------------------------------

struct AonPathInstance {
    BroadcastGame game;
    SpanningTree tree; // the path <r, v1, ..., vn>
    Rational x;        // 1/(n - n/e' + 1) with the fixed rational e'
};

/// Path of n-1 edges of weight x plus a final edge of weight 1, with two
/// shortcut edges (r,v_{n-1}) of weight x and (r,v_n) of weight 1. Uses the
/// project-wide rational approximation e' = 2718281828459045/10^15.
AonPathInstance gen_aon_path(long n);

// --- 3SAT-4 reduction ------------------------------------------------------------

struct CnfFormula {
    int num_vars = 0;
    std::vector<std::array<int, 3>> clauses; // DIMACS-style signed 1-based literals
};

/// DIMACS CNF; enforces the 3SAT-4 shape (3 distinct variables per clause,
/// every variable in at most 4 clauses).
CnfFormula parse_dimacs(const std::string& text);

struct LabelConstants {
    std::array<Integer, 10> n; // n[1..9]; n[9] = 7, n[j] = 4*n[j+1]^2

    static LabelConstants make();
};

struct LightCatalog {
    /// E(l) keyed by (variable, positive?): the far light edges of l's
    /// gadgets plus the near light edges of l-bar's gadgets.
    std::map<std::pair<int, bool>, std::vector<EdgeId>> sets;

    std::vector<EdgeId> all_light_edges() const;
};

struct SatGadgetInfo {
    int clause = 0;
    int var = 0;          // 1-based
    bool positive = true; // literal sign
    int label = 0;
    EdgeId light_near = -1; // (l(c,l), u(c,l-bar)); prescribed usage n_j
    EdgeId light_far = -1;  // (u(c,l-bar), u(c,l)); prescribed usage n_j - 3
};

struct SatInstance {
    BroadcastGame game;
    SpanningTree tree;
    LightCatalog catalog;
    LabelConstants constants;
    std::vector<int> var_label; // per variable, 1-based vars at index var
    std::vector<SatGadgetInfo> gadgets;
    Rational k_param;
};

/// The full reduction graph: literal, clause and consistency gadgets plus
/// auxiliary nodes sized so the two light edges of each literal gadget are
/// used by exactly n_j and n_j - 3 players. Labels come from greedy
/// coloring preferring 9 downward; formulas that need a label below 7 are
/// rejected with a size estimate. The designated tree's usage counts are
/// self-checked before returning.
SatInstance gen_3sat4(const CnfFormula& formula, const Rational& k_param = Rational(1000000));

} // namespace stabnet
