#include "stabnet/generators.hpp"

#include "stabnet/errors.hpp"
#include "stabnet/game.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stabnet {

namespace {

/// Incremental graph assembly with tree-edge bookkeeping.
struct Builder {
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    std::vector<EdgeId> tree_edges;

    NodeId node(std::string label) {
        labels.push_back(std::move(label));
        return static_cast<NodeId>(labels.size() - 1);
    }
    EdgeId edge(NodeId u, NodeId v, Rational w, bool in_tree) {
        EdgeId id = static_cast<EdgeId>(edges.size());
        edges.push_back({id, u, v, std::move(w)});
        if (in_tree) tree_edges.push_back(id);
        return id;
    }
};

long minimal_ell(long kappa) {
    long ell = 1;
    while (harmonic(kappa + ell) - harmonic(kappa) <= 1) ++ell;
    return ell;
}

} // namespace

// --- bypass ------------------------------------------------------------------

BypassInstance gen_bypass(long kappa, long attach_count) {
    if (kappa < 1) throw InvalidInput("bypass capacity must be >= 1");
    if (attach_count < 0) throw InvalidInput("attach count must be >= 0");
    const long ell = minimal_ell(kappa);

    Builder b;
    NodeId root = b.node("r");
    NodeId prev = root;
    NodeId connector = -1;
    for (long i = 1; i <= ell; ++i) {
        connector = b.node(i == ell ? "c" : "p" + std::to_string(i));
        b.edge(prev, connector, 1, true);
        prev = connector;
    }
    EdgeId bypass = b.edge(connector, root, harmonic(kappa + ell) - harmonic(kappa), false);
    for (long t = 1; t <= attach_count; ++t)
        b.edge(connector, b.node("s" + std::to_string(t)), 0, true);

    BroadcastGame game{Graph(std::move(b.labels), std::move(b.edges)), root};
    SpanningTree tree(game.graph, root, b.tree_edges);
    return {std::move(game), std::move(tree), BypassSpec{kappa, ell, connector, bypass}};
}

// --- bin packing ----------------------------------------------------------------

BinPackInstance gen_binpack(std::vector<long> sizes, long bins, long capacity) {
    std::ostringstream problems;
    if (sizes.empty()) problems << "no items; ";
    long total = 0;
    long max_size = 0;
    for (long s : sizes) {
        if (s <= 0 || s % 2 != 0) problems << "item size " << s << " is not a positive even integer; ";
        total += s;
        max_size = std::max(max_size, s);
    }
    if (bins < 1) problems << "bin count must be >= 1; ";
    if (capacity % 2 != 0) problems << "capacity must be even; ";
    if (capacity < max_size) problems << "capacity below the largest item; ";
    if (total != bins * capacity) problems << "sizes must sum to bins*capacity; ";
    const std::string msg = problems.str();
    if (!msg.empty()) throw InvalidInput("bin-packing instance rejected: " + msg);

    const long ell = minimal_ell(capacity);
    const Rational link_weight = 2 * (harmonic(capacity + ell) - harmonic(capacity));
    const long n = static_cast<long>(sizes.size());

    Builder b;
    NodeId root = b.node("r");
    BinPackInstance inst;
    inst.bins = bins;
    inst.capacity = capacity;
    inst.sizes = sizes;
    inst.ell = ell;

    for (long j = 1; j <= bins; ++j) {
        NodeId prev = root;
        NodeId connector = -1;
        for (long i = 1; i <= ell; ++i) {
            connector = b.node(i == ell ? "c" + std::to_string(j)
                                        : "b" + std::to_string(j) + "p" + std::to_string(i));
            b.edge(prev, connector, 1, true);
            prev = connector;
        }
        b.edge(connector, root, link_weight / 2, false); // the bypass edge
        inst.connectors.push_back(connector);
    }
    for (long i = 1; i <= n; ++i) {
        NodeId center = b.node("x" + std::to_string(i));
        inst.centers.push_back(center);
        for (long t = 1; t + 1 <= sizes[static_cast<std::size_t>(i - 1)]; ++t)
            b.edge(center, b.node("x" + std::to_string(i) + "l" + std::to_string(t)), 0, true);
    }
    inst.link_edges.assign(static_cast<std::size_t>(n), {});
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < bins; ++j)
            inst.link_edges[static_cast<std::size_t>(i)].push_back(
                b.edge(inst.centers[static_cast<std::size_t>(i)],
                       inst.connectors[static_cast<std::size_t>(j)], link_weight, false));

    inst.base_tree_edges = b.tree_edges;
    inst.mst_weight = bins * ell + n * link_weight;
    inst.game = BroadcastGame{Graph(std::move(b.labels), std::move(b.edges)), root};
    return inst;
}

SpanningTree BinPackInstance::tree_for(std::span<const int> assignment) const {
    if (static_cast<long>(assignment.size()) != static_cast<long>(sizes.size()))
        throw InvalidInput("one bin per item required");
    std::vector<EdgeId> edges = base_tree_edges;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        int j = assignment[i];
        if (j < 0 || j >= bins) throw InvalidInput("bin index out of range");
        edges.push_back(link_edges[i][static_cast<std::size_t>(j)]);
    }
    return SpanningTree(game.graph, game.root, std::move(edges));
}

// --- independent set ---------------------------------------------------------------

IndepSetInstance gen_indepset(int h_node_count, std::vector<std::pair<int, int>> h_edges,
                              Rational delta) {
    if (delta <= 0 || delta > Rational(1, 12))
        throw InvalidInput("delta must lie in (0, 1/12]");
    std::vector<int> degree(static_cast<std::size_t>(h_node_count), 0);
    for (auto [s, t] : h_edges) {
        if (s < 0 || s >= h_node_count || t < 0 || t >= h_node_count || s == t)
            throw InvalidInput("bad H edge");
        ++degree[static_cast<std::size_t>(s)];
        ++degree[static_cast<std::size_t>(t)];
    }
    for (int d : degree)
        if (d != 3) throw InvalidInput("H must be 3-regular");

    const Rational link_weight = (2 + delta) / 3;
    Builder b;
    NodeId root = b.node("r");
    IndepSetInstance inst;
    inst.delta = std::move(delta);
    inst.h_node_count = h_node_count;
    inst.h_edges = h_edges;

    for (int i = 0; i < h_node_count; ++i) inst.u_node.push_back(b.node("u" + std::to_string(i)));
    for (std::size_t a = 0; a < h_edges.size(); ++a)
        inst.v_node.push_back(b.node("z" + std::to_string(a)));

    inst.root_edge.assign(b.labels.size(), -1);
    for (NodeId v = 1; v < static_cast<NodeId>(b.labels.size()); ++v)
        inst.root_edge[static_cast<std::size_t>(v)] = b.edge(v, root, 1, false);
    for (std::size_t a = 0; a < h_edges.size(); ++a) {
        inst.link_edge.push_back(
            {b.edge(inst.v_node[a], inst.u_node[static_cast<std::size_t>(h_edges[a].first)],
                    link_weight, false),
             b.edge(inst.v_node[a], inst.u_node[static_cast<std::size_t>(h_edges[a].second)],
                    link_weight, false)});
    }
    inst.game = BroadcastGame{Graph(std::move(b.labels), std::move(b.edges)), root};
    return inst;
}

SpanningTree IndepSetInstance::branch_tree(std::span<const int> independent_set) const {
    std::set<int> chosen(independent_set.begin(), independent_set.end());
    for (int i : chosen)
        if (i < 0 || i >= h_node_count) throw InvalidInput("H node out of range");
    for (auto [s, t] : h_edges)
        if (chosen.count(s) && chosen.count(t))
            throw InvalidInput("the given set is not independent");

    std::vector<EdgeId> edges;
    std::vector<char> v_attached(h_edges.size(), 0);
    for (int i : chosen) {
        edges.push_back(root_edge[static_cast<std::size_t>(u_node[static_cast<std::size_t>(i)])]);
        for (std::size_t a = 0; a < h_edges.size(); ++a) {
            if (h_edges[a].first == i)
                edges.push_back(link_edge[a][0]), v_attached[a] = 1;
            else if (h_edges[a].second == i)
                edges.push_back(link_edge[a][1]), v_attached[a] = 1;
        }
    }
    for (int i = 0; i < h_node_count; ++i)
        if (!chosen.count(i))
            edges.push_back(root_edge[static_cast<std::size_t>(u_node[static_cast<std::size_t>(i)])]);
    for (std::size_t a = 0; a < h_edges.size(); ++a)
        if (!v_attached[a])
            edges.push_back(root_edge[static_cast<std::size_t>(v_node[a])]);
    return SpanningTree(game.graph, game.root, std::move(edges));
}

SpanningTree IndepSetInstance::type_c_tree(int h_node, int attach_count) const {
    if (h_node < 0 || h_node >= h_node_count) throw InvalidInput("H node out of range");
    if (attach_count < 1 || attach_count > 2) throw InvalidInput("a type-C branch attaches 1 or 2 nodes");
    std::vector<EdgeId> edges;
    std::vector<char> v_attached(h_edges.size(), 0);
    edges.push_back(root_edge[static_cast<std::size_t>(u_node[static_cast<std::size_t>(h_node)])]);
    int attached = 0;
    for (std::size_t a = 0; a < h_edges.size() && attached < attach_count; ++a) {
        if (h_edges[a].first == h_node)
            edges.push_back(link_edge[a][0]), v_attached[a] = 1, ++attached;
        else if (h_edges[a].second == h_node)
            edges.push_back(link_edge[a][1]), v_attached[a] = 1, ++attached;
    }
    for (int i = 0; i < h_node_count; ++i)
        if (i != h_node)
            edges.push_back(root_edge[static_cast<std::size_t>(u_node[static_cast<std::size_t>(i)])]);
    for (std::size_t a = 0; a < h_edges.size(); ++a)
        if (!v_attached[a])
            edges.push_back(root_edge[static_cast<std::size_t>(v_node[a])]);
    return SpanningTree(game.graph, game.root, std::move(edges));
}

std::vector<BranchType> IndepSetInstance::classify(const SpanningTree& tree) const {
    std::vector<char> in_u(game.graph.node_count(), 0);
    for (NodeId u : u_node) in_u[static_cast<std::size_t>(u)] = 1;

    // group nodes by their branch root (the depth-1 ancestor)
    std::map<NodeId, std::pair<int, int>> branch; // root child -> (max rel depth, children of root child)
    for (NodeId v = 0; v < game.graph.node_count(); ++v) {
        if (v == game.root) continue;
        NodeId walk = v;
        while (tree.parent(walk) != game.root) walk = tree.parent(walk);
        auto& info = branch[walk];
        info.first = std::max(info.first, tree.depth(v) - 1);
        if (tree.parent(v) == walk) ++info.second;
    }
    std::vector<BranchType> out;
    for (const auto& [head, info] : branch) {
        const auto [rel_depth, head_children] = info;
        if (rel_depth == 0)
            out.push_back(BranchType::a);
        else if (rel_depth == 1)
            out.push_back(in_u[static_cast<std::size_t>(head)] && head_children == 3
                              ? BranchType::b
                              : BranchType::c);
        else if (rel_depth == 2)
            out.push_back(BranchType::d);
        else
            out.push_back(BranchType::e);
    }
    return out;
}

// --- cycle -----------------------------------------------------------------------

CycleInstance gen_cycle(long n) {
    if (n < 2) throw InvalidInput("cycle family needs n >= 2");
    Builder b;
    NodeId root = b.node("r");
    NodeId prev = root;
    for (long i = 1; i <= n; ++i) {
        NodeId v = b.node("v" + std::to_string(i));
        b.edge(prev, v, 1, true);
        prev = v;
    }
    b.edge(prev, root, 1, false);
    BroadcastGame game{Graph(std::move(b.labels), std::move(b.edges)), root};
    SpanningTree tree(game.graph, root, b.tree_edges);
    return {std::move(game), std::move(tree)};
}

// --- all-or-nothing path -----------------------------------------------------------

AonPathInstance gen_aon_path(long n) {
    if (n < 3) throw InvalidInput("all-or-nothing path family needs n >= 3");
    static const Rational e_approx(Integer("2718281828459045"), Integer("1000000000000000"));
    const Rational x = 1 / (Rational(n) - Rational(n) / e_approx + 1);

    Builder b;
    NodeId root = b.node("r");
    std::vector<NodeId> v{root};
    for (long i = 1; i <= n; ++i) v.push_back(b.node("v" + std::to_string(i)));
    for (long i = 0; i + 2 <= n; ++i) b.edge(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i + 1)], x, true);
    b.edge(v[static_cast<std::size_t>(n - 1)], v[static_cast<std::size_t>(n)], 1, true);
    b.edge(root, v[static_cast<std::size_t>(n - 1)], x, false);
    b.edge(root, v[static_cast<std::size_t>(n)], 1, false);

    BroadcastGame game{Graph(std::move(b.labels), std::move(b.edges)), root};
    SpanningTree tree(game.graph, root, b.tree_edges);
    return {std::move(game), std::move(tree), x};
}

// --- 3SAT-4 --------------------------------------------------------------------------

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream in(text);
    std::string line;
    int expected_clauses = -1;
    std::vector<int> pending;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            ls >> p >> cnf >> f.num_vars >> expected_clauses;
            if (cnf != "cnf" || f.num_vars <= 0)
                throw ParseError("bad DIMACS problem line");
            continue;
        }
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (pending.size() != 3) throw ParseError("3SAT-4 clauses must have exactly 3 literals");
                f.clauses.push_back({pending[0], pending[1], pending[2]});
                pending.clear();
            } else {
                pending.push_back(lit);
            }
        }
    }
    if (!pending.empty()) throw ParseError("unterminated clause");
    if (f.num_vars == 0) throw ParseError("missing DIMACS problem line");
    if (expected_clauses >= 0 && expected_clauses != static_cast<int>(f.clauses.size()))
        throw ParseError("clause count does not match the problem line");

    std::vector<int> occurrences(static_cast<std::size_t>(f.num_vars) + 1, 0);
    for (const auto& clause : f.clauses) {
        std::set<int> vars;
        for (int lit : clause) {
            int var = std::abs(lit);
            if (var < 1 || var > f.num_vars) throw ParseError("literal out of range");
            vars.insert(var);
            ++occurrences[static_cast<std::size_t>(var)];
        }
        if (vars.size() != 3) throw ParseError("clause variables must be distinct");
    }
    for (int var = 1; var <= f.num_vars; ++var)
        if (occurrences[static_cast<std::size_t>(var)] > 4)
            throw ParseError("variable " + std::to_string(var) + " appears more than 4 times");
    return f;
}

LabelConstants LabelConstants::make() {
    LabelConstants c;
    c.n[9] = 7;
    for (int j = 8; j >= 1; --j) c.n[static_cast<std::size_t>(j)] = 4 * c.n[static_cast<std::size_t>(j) + 1] * c.n[static_cast<std::size_t>(j) + 1];
    return c;
}

std::vector<EdgeId> LightCatalog::all_light_edges() const {
    std::vector<EdgeId> out;
    for (const auto& [lit, edges] : sets) out.insert(out.end(), edges.begin(), edges.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct Occurrence {
    int clause = 0;
    int slot = 0; // label-sorted position within the clause (0..2)
    bool positive = true;
};

} // namespace

SatInstance gen_3sat4(const CnfFormula& formula, const Rational& k_param) {
    const LabelConstants constants = LabelConstants::make();
    if (k_param <= 3 * Rational(static_cast<long>(formula.clauses.size())))
        throw InvalidInput("K must be large relative to 3|C|");

    // Validate the 3SAT-4 shape (also done by parse_dimacs for file input).
    std::vector<std::vector<int>> var_clauses(static_cast<std::size_t>(formula.num_vars) + 1);
    for (std::size_t ci = 0; ci < formula.clauses.size(); ++ci) {
        std::set<int> vars;
        for (int lit : formula.clauses[ci]) {
            int var = std::abs(lit);
            if (var < 1 || var > formula.num_vars) throw InvalidInput("literal out of range");
            vars.insert(var);
            var_clauses[static_cast<std::size_t>(var)].push_back(static_cast<int>(ci));
        }
        if (vars.size() != 3) throw InvalidInput("clause variables must be distinct");
    }
    for (int var = 1; var <= formula.num_vars; ++var)
        if (var_clauses[static_cast<std::size_t>(var)].size() > 4)
            throw InvalidInput("variable appears more than 4 times");

    // Greedy labeling, highest label first so the gadget sizes stay small.
    std::vector<int> label(static_cast<std::size_t>(formula.num_vars) + 1, 0);
    for (int var = 1; var <= formula.num_vars; ++var) {
        std::set<int> taken;
        for (int ci : var_clauses[static_cast<std::size_t>(var)])
            for (int lit : formula.clauses[static_cast<std::size_t>(ci)]) {
                int other = std::abs(lit);
                if (other != var && label[static_cast<std::size_t>(other)] != 0)
                    taken.insert(label[static_cast<std::size_t>(other)]);
            }
        int chosen = 0;
        for (int j = 9; j >= 1; --j) {
            if (!taken.count(j)) {
                chosen = j;
                break;
            }
        }
        if (chosen < 7) {
            std::ostringstream msg;
            msg << "formula needs label " << chosen << "; a label-6 literal gadget alone has about "
                << constants.n[6].get_str() << " nodes and is rejected as infeasible";
            throw InvalidInput(msg.str());
        }
        label[static_cast<std::size_t>(var)] = chosen;
    }

    auto n_of = [&](int var) -> const Integer& {
        return constants.n[static_cast<std::size_t>(label[static_cast<std::size_t>(var)])];
    };

    Builder b;
    NodeId root = b.node("r");
    const Rational& K = k_param;

    // Per clause and slot: the three anchor nodes of each literal gadget.
    struct GadgetNodes {
        NodeId l = -1;   // where the gadget hangs (root for slot 0)
        NodeId mid = -1; // u(c, l-bar)
        NodeId far = -1; // u(c, l)
        int var = 0;
        bool positive = true;
    };
    std::vector<std::array<GadgetNodes, 3>> gadget_nodes(formula.clauses.size());
    std::vector<std::array<std::pair<EdgeId, EdgeId>, 3>> light_edges(formula.clauses.size());
    std::vector<long> consistency_t(1, 0); // per node id, resized as nodes appear
    auto bump_t = [&](NodeId v) {
        if (static_cast<std::size_t>(v) >= consistency_t.size()) consistency_t.resize(b.labels.size(), 0);
        ++consistency_t[static_cast<std::size_t>(v)];
    };

    for (std::size_t ci = 0; ci < formula.clauses.size(); ++ci) {
        // slots sorted by ascending label (descending n_j)
        std::array<int, 3> lits = formula.clauses[ci];
        std::sort(lits.begin(), lits.end(), [&](int a, int bb) {
            return label[static_cast<std::size_t>(std::abs(a))] < label[static_cast<std::size_t>(std::abs(bb))];
        });
        const std::string cs = std::to_string(ci);
        NodeId hang = root;
        for (int slot = 0; slot < 3; ++slot) {
            const int lit = lits[static_cast<std::size_t>(slot)];
            const int var = std::abs(lit);
            const Rational nj(n_of(var));
            GadgetNodes g;
            g.l = hang;
            g.var = var;
            g.positive = lit > 0;
            const std::string tag = "c" + cs + "s" + std::to_string(slot);
            g.mid = b.node(tag + "m");
            g.far = b.node(tag + "f");
            NodeId v1 = b.node(tag + "v1");
            NodeId v2 = b.node(tag + "v2");
            NodeId v3 = b.node(tag + "v3");
            EdgeId near_edge = b.edge(g.l, g.mid, 1, true);
            EdgeId far_edge = b.edge(g.mid, g.far, 1, true);
            b.edge(g.l, v1, K, true);
            b.edge(v1, v2, K, true);
            b.edge(v3, g.far, K, true);
            b.edge(g.l, v3, K + 1 / (nj - 3), false);
            b.edge(v2, g.far, 3 * K / 2 - 1 / (nj + 1), false);
            gadget_nodes[ci][static_cast<std::size_t>(slot)] = g;
            light_edges[ci][static_cast<std::size_t>(slot)] = {near_edge, far_edge};
            hang = g.far;
        }
        // clause node: tree edge to the last far node, shortcut to the root
        NodeId vc = b.node("c" + cs + "w");
        b.edge(vc, gadget_nodes[ci][2].far, K, true);
        const Rational n1(n_of(gadget_nodes[ci][0].var));
        const Rational n2(n_of(gadget_nodes[ci][1].var));
        const Rational n3(n_of(gadget_nodes[ci][2].var));
        b.edge(vc, root, K + 1 / n1 + 1 / (n2 - 3) + 1 / (n3 - 3), false);
    }

    // Consistency gadgets between consecutive occurrences of each variable.
    consistency_t.assign(b.labels.size(), 0);
    std::vector<std::vector<Occurrence>> occs(static_cast<std::size_t>(formula.num_vars) + 1);
    for (std::size_t ci = 0; ci < formula.clauses.size(); ++ci)
        for (int slot = 0; slot < 3; ++slot) {
            const auto& g = gadget_nodes[ci][static_cast<std::size_t>(slot)];
            occs[static_cast<std::size_t>(g.var)].push_back(
                {static_cast<int>(ci), slot, g.positive});
        }

    for (int var = 1; var <= formula.num_vars; ++var) {
        const auto& list = occs[static_cast<std::size_t>(var)];
        const Rational nj(n_of(var));
        for (std::size_t i = 0; i + 1 < list.size(); ++i) {
            const auto& first = list[i];
            const auto& second = list[i + 1];
            const auto& ga = gadget_nodes[static_cast<std::size_t>(first.clause)]
                                         [static_cast<std::size_t>(first.slot)];
            const auto& gb = gadget_nodes[static_cast<std::size_t>(second.clause)]
                                         [static_cast<std::size_t>(second.slot)];
            const std::string tag = "x" + std::to_string(var) + "g" + std::to_string(i);
            NodeId u1 = b.node(tag + "a");
            NodeId u2 = b.node(tag + "b");
            if (first.positive == second.positive) {
                // same literal in both clauses
                b.edge(u1, ga.mid, K, true);
                bump_t(ga.mid);
                b.edge(u1, gb.mid, K + 1 / (2 * nj), false);
                b.edge(u2, gb.mid, K, true);
                bump_t(gb.mid);
                b.edge(u2, ga.mid, K + 1 / (2 * nj), false);
            } else {
                // sign flips between the clauses; gb's mid node is u(c', l)
                b.edge(u1, ga.far, K, true);
                bump_t(ga.far);
                b.edge(u1, gb.mid, K + 1 / nj + 1 / (2 * nj * nj), false);
                b.edge(u2, gb.mid, K, true);
                bump_t(gb.mid);
                b.edge(u2, ga.far, K, false);
            }
        }
    }

    // Auxiliary leaves sized so light-edge usages land on n_j and n_j - 3.
    consistency_t.resize(b.labels.size(), 0);
    long aux_counter = 0;
    auto attach_aux = [&](NodeId to, const Integer& count) {
        if (count < 0) throw std::logic_error("negative auxiliary count");
        for (Integer i = 0; i < count; ++i)
            b.edge(to, b.node("a" + std::to_string(aux_counter++)), 0, true);
    };
    for (std::size_t ci = 0; ci < formula.clauses.size(); ++ci) {
        for (int slot = 0; slot < 3; ++slot) {
            const auto& g = gadget_nodes[ci][static_cast<std::size_t>(slot)];
            attach_aux(g.mid, 2 - consistency_t[static_cast<std::size_t>(g.mid)]);
            const Integer& nj = n_of(g.var);
            const long t_far = consistency_t[static_cast<std::size_t>(g.far)];
            if (slot == 2) {
                attach_aux(g.far, nj - 6 - t_far);
            } else {
                const Integer& nj_next =
                    n_of(gadget_nodes[ci][static_cast<std::size_t>(slot) + 1].var);
                attach_aux(g.far, nj - nj_next - 7 - t_far);
            }
        }
    }

    BroadcastGame game{Graph(std::move(b.labels), std::move(b.edges)), root};
    SpanningTree tree(game.graph, root, b.tree_edges);
    SatInstance inst{std::move(game), std::move(tree), LightCatalog{},
                     constants,       label,           {},
                     k_param};

    for (std::size_t ci = 0; ci < formula.clauses.size(); ++ci)
        for (int slot = 0; slot < 3; ++slot) {
            const auto& g = gadget_nodes[ci][static_cast<std::size_t>(slot)];
            const auto [near_edge, far_edge] = light_edges[ci][static_cast<std::size_t>(slot)];
            SatGadgetInfo info;
            info.clause = static_cast<int>(ci);
            info.var = g.var;
            info.positive = g.positive;
            info.label = label[static_cast<std::size_t>(g.var)];
            info.light_near = near_edge;
            info.light_far = far_edge;
            inst.gadgets.push_back(info);
            // E(l) gains the far edge; E(l-bar) gains the near edge.
            inst.catalog.sets[{g.var, g.positive}].push_back(far_edge);
            inst.catalog.sets[{g.var, !g.positive}].push_back(near_edge);
        }

    // Structural self-check: the prescribed usage counts must hold exactly.
    for (const auto& g : inst.gadgets) {
        const Integer& nj = inst.constants.n[static_cast<std::size_t>(g.label)];
        if (Integer(inst.tree.usage(g.light_near)) != nj ||
            Integer(inst.tree.usage(g.light_far)) != nj - 3)
            throw std::logic_error("literal-gadget usage counts are off");
    }
    return inst;
}

} // namespace stabnet
