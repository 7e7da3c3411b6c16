// Command-line front end: instance generators, equilibrium checks and the
// subsidy solvers, all exchanging the JSON formats of the core library.

#include "stabnet/enforce.hpp"
#include "stabnet/errors.hpp"
#include "stabnet/game.hpp"
#include "stabnet/generators.hpp"
#include "stabnet/model.hpp"
#include "stabnet/oracles.hpp"
#include "stabnet/sne.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace stabnet;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

std::string dec(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

BroadcastGame load_broadcast(const std::string& path) {
    Game game = load_game(read_file(path));
    auto* b = std::get_if<BroadcastGame>(&game);
    if (b == nullptr) throw InvalidInput("'" + path + "' is not a broadcast game");
    return std::move(*b);
}

SpanningTree load_tree_for(const BroadcastGame& game, const std::string& path) {
    return SpanningTree(game.graph, game.root, load_tree(read_file(path)));
}

struct GenOutputs {
    std::string game_path;
    std::string tree_path;
    std::string dot_path;

    void emit(const BroadcastGame& game, const SpanningTree* tree) const {
        if (!game_path.empty()) write_file(game_path, save_game(Game(game)));
        if (!tree_path.empty()) {
            if (tree == nullptr) throw InvalidInput("this generator produced no designated tree");
            write_file(tree_path, save_tree(tree->edges()));
        }
        if (!dot_path.empty())
            write_file(dot_path, to_dot(game.graph, tree, nullptr, game.root));
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("-o,--out", game_path, "write the game JSON here")->required();
        cmd->add_option("--tree", tree_path, "write the designated tree JSON here");
        cmd->add_option("--dot", dot_path, "write a GraphViz rendering here");
    }
};

std::vector<long> parse_long_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
    return out;
}

std::vector<std::pair<int, int>> parse_edge_list(const std::string& text) {
    std::vector<std::pair<int, int>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dash = item.find('-');
        if (dash == std::string::npos) throw ParseError("edges are 'u-v' pairs");
        out.push_back({std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1))});
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"subsidy toolkit for network design games"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for exhaustive searches")
        ->default_val(1)
        ->check(CLI::PositiveNumber);

    // --- gen -------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate an instance family");
    gen->require_subcommand(1);

    struct {
        long kappa = 1;
        long beta = 0;
        GenOutputs out;
    } byp;
    auto* gen_byp = gen->add_subcommand("bypass", "bypass gadget");
    gen_byp->add_option("--kappa", byp.kappa, "gadget capacity")->required();
    gen_byp->add_option("--beta", byp.beta, "zero-weight leaves on the connector");
    byp.out.attach(gen_byp);

    struct {
        std::string sizes;
        long bins = 0;
        long capacity = 0;
        std::string assignment;
        GenOutputs out;
    } bp;
    auto* gen_bp = gen->add_subcommand("binpack", "bin-packing reduction graph");
    gen_bp->add_option("--sizes", bp.sizes, "comma-separated even item sizes")->required();
    gen_bp->add_option("--bins", bp.bins, "bin count")->required();
    gen_bp->add_option("--capacity", bp.capacity, "bin capacity")->required();
    gen_bp->add_option("--assignment", bp.assignment,
                       "item->bin assignment for the designated tree (comma-separated)");
    bp.out.attach(gen_bp);

    struct {
        int nodes = 0;
        std::string edges;
        std::string delta = "1/12";
        std::string set;
        GenOutputs out;
    } is;
    auto* gen_is = gen->add_subcommand("indepset", "independent-set reduction graph");
    gen_is->add_option("--n", is.nodes, "number of H nodes")->required();
    gen_is->add_option("--edges", is.edges, "H edges as 'u-v,u-v,...'")->required();
    gen_is->add_option("--delta", is.delta, "rational delta in (0,1/12]");
    gen_is->add_option("--set", is.set, "independent set for the designated branch tree");
    is.out.attach(gen_is);

    struct {
        long n = 3;
        GenOutputs out;
    } cyc;
    auto* gen_cyc = gen->add_subcommand("cycle", "unit cycle family");
    gen_cyc->add_option("--n", cyc.n, "number of players")->required();
    cyc.out.attach(gen_cyc);

    struct {
        long n = 3;
        GenOutputs out;
    } aon;
    auto* gen_aon = gen->add_subcommand("aon-path", "all-or-nothing path family");
    gen_aon->add_option("--n", aon.n, "number of players")->required();
    aon.out.attach(gen_aon);

    struct {
        std::string cnf;
        std::string k = "1000000";
        GenOutputs out;
    } sat;
    auto* gen_sat = gen->add_subcommand("sat", "3SAT-4 reduction graph from a DIMACS file");
    gen_sat->add_option("--cnf", sat.cnf, "DIMACS CNF input")->required();
    gen_sat->add_option("--k", sat.k, "heavy-edge base weight K (rational)");
    sat.out.attach(gen_sat);

    // --- check --------------------------------------------------------------
    struct {
        std::string game, tree, subsidies, tol;
    } chk;
    auto* check = app.add_subcommand("check", "equilibrium check for a broadcast tree");
    check->add_option("--game", chk.game)->required();
    check->add_option("--tree", chk.tree)->required();
    check->add_option("--subsidies", chk.subsidies);
    check->add_option("--tol", chk.tol, "slack; deviations gaining at most this are accepted");

    // --- solve-sne -------------------------------------------------------------
    struct {
        std::string game, tree, method = "lp3", out;
    } sne;
    auto* solve_sne = app.add_subcommand("solve-sne", "minimum fractional subsidies for a tree");
    solve_sne->add_option("--game", sne.game)->required();
    solve_sne->add_option("--tree", sne.tree)->required();
    solve_sne->add_option("--method", sne.method)->check(CLI::IsMember({"lp3", "lp2", "rowgen"}));
    solve_sne->add_option("-o,--out", sne.out, "write the subsidy JSON here");

    // --- enforce-frac -------------------------------------------------------------
    struct {
        std::string game, tree, out;
    } frac;
    auto* enforce_frac = app.add_subcommand("enforce-frac",
                                            "constructive wgt(T)/e subsidies for an MST");
    enforce_frac->add_option("--game", frac.game)->required();
    enforce_frac->add_option("--tree", frac.tree, "designated MST (computed if omitted)");
    enforce_frac->add_option("-o,--out", frac.out);

    // --- solve-aon ---------------------------------------------------------------
    struct {
        std::string game, tree, candidates = "tree", out;
        int cap = 24;
    } aonc;
    auto* solve_aon = app.add_subcommand("solve-aon", "exhaustive all-or-nothing search");
    solve_aon->add_option("--game", aonc.game)->required();
    solve_aon->add_option("--tree", aonc.tree)->required();
    solve_aon->add_option("--candidates", aonc.candidates)
        ->check(CLI::IsMember({"tree", "light"}));
    solve_aon->add_option("--cap", aonc.cap, "maximum candidate-set size");
    solve_aon->add_option("-o,--out", aonc.out);

    // --- pos / best-eq --------------------------------------------------------------
    struct {
        std::string game;
        long cap = 1000000;
    } posc, beq;
    auto* pos = app.add_subcommand("pos", "price of stability by full enumeration");
    pos->add_option("--game", posc.game)->required();
    pos->add_option("--cap", posc.cap);
    auto* best_eq = app.add_subcommand("best-eq", "best equilibrium by full enumeration");
    best_eq->add_option("--game", beq.game)->required();
    best_eq->add_option("--cap", beq.cap);

    // --- dynamics ---------------------------------------------------------------------
    struct {
        std::string game;
        std::uint64_t seed = 0;
        bool seeded = false;
        int max_rounds = 1000;
    } dyn;
    auto* dynamics = app.add_subcommand("dynamics", "best-response dynamics");
    dynamics->add_option("--game", dyn.game)->required();
    auto* seed_opt = dynamics->add_option("--seed", dyn.seed, "randomize player order per round");
    dynamics->add_option("--max-rounds", dyn.max_rounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    dyn.seeded = seed_opt->count() > 0;

    if (gen_byp->parsed()) {
        auto inst = gen_bypass(byp.kappa, byp.beta);
        byp.out.emit(inst.game, &inst.tree);
        ordered_json j;
        j["ell"] = inst.spec.ell;
        j["bypass_edge"] = inst.spec.bypass_edge;
        j["bypass_weight"] = rat_str(inst.game.graph.edge(inst.spec.bypass_edge).w);
        std::cout << j.dump() << "\n";
        return 0;
    }
    if (gen_bp->parsed()) {
        auto inst = gen_binpack(parse_long_list(bp.sizes), bp.bins, bp.capacity);
        std::optional<SpanningTree> tree;
        if (!bp.assignment.empty()) {
            std::vector<int> a;
            for (long x : parse_long_list(bp.assignment)) a.push_back(static_cast<int>(x));
            tree = inst.tree_for(a);
        }
        bp.out.emit(inst.game, tree ? &*tree : nullptr);
        ordered_json j;
        j["ell"] = inst.ell;
        j["mst_weight"] = rat_str(inst.mst_weight);
        j["mst_weight_decimal"] = rat_decimal(inst.mst_weight);
        std::cout << j.dump() << "\n";
        return 0;
    }
    if (gen_is->parsed()) {
        auto inst = gen_indepset(is.nodes, parse_edge_list(is.edges), rat_parse(is.delta));
        std::optional<SpanningTree> tree;
        if (!is.set.empty()) {
            std::vector<int> chosen;
            for (long x : parse_long_list(is.set)) chosen.push_back(static_cast<int>(x));
            tree = inst.branch_tree(chosen);
        }
        is.out.emit(inst.game, tree ? &*tree : nullptr);
        ordered_json j;
        j["nodes"] = inst.game.graph.node_count();
        if (tree) j["tree_weight"] = rat_str(wgt(inst.game.graph, tree->edges()));
        std::cout << j.dump() << "\n";
        return 0;
    }
    if (gen_cyc->parsed()) {
        auto inst = gen_cycle(cyc.n);
        cyc.out.emit(inst.game, &inst.tree);
        ordered_json j;
        j["tree_weight"] = rat_str(wgt(inst.game.graph, inst.tree.edges()));
        std::cout << j.dump() << "\n";
        return 0;
    }
    if (gen_aon->parsed()) {
        auto inst = gen_aon_path(aon.n);
        aon.out.emit(inst.game, &inst.tree);
        ordered_json j;
        j["x"] = rat_str(inst.x);
        j["x_decimal"] = rat_decimal(inst.x);
        j["tree_weight"] = rat_str(wgt(inst.game.graph, inst.tree.edges()));
        std::cout << j.dump() << "\n";
        return 0;
    }
    if (gen_sat->parsed()) {
        auto inst = gen_3sat4(parse_dimacs(read_file(sat.cnf)), rat_parse(sat.k));
        sat.out.emit(inst.game, &inst.tree);
        ordered_json j;
        j["nodes"] = inst.game.graph.node_count();
        j["light_edges"] = inst.catalog.all_light_edges().size();
        ordered_json labels = ordered_json::object();
        for (int var = 1; var < static_cast<int>(inst.var_label.size()); ++var)
            labels[std::to_string(var)] = inst.var_label[static_cast<std::size_t>(var)];
        j["labels"] = std::move(labels);
        std::cout << j.dump() << "\n";
        return 0;
    }

    if (check->parsed()) {
        BroadcastGame game = load_broadcast(chk.game);
        SpanningTree tree = load_tree_for(game, chk.tree);
        SubsidyAssignment b;
        if (!chk.subsidies.empty()) b = load_subsidies(read_file(chk.subsidies));
        b.validate(game.graph);
        Rational slack = chk.tol.empty() ? Rational(0) : rat_parse_decimal(chk.tol);
        Verdict verdict = is_equilibrium_broadcast(game, tree, b, slack);
        std::cout << verdict_to_json(verdict, game.graph);
        return verdict.ok ? 0 : 2;
    }

    if (solve_sne->parsed()) {
        BroadcastGame game = load_broadcast(sne.game);
        SpanningTree tree = load_tree_for(game, sne.tree);
        SneMethod method = sne.method == "lp3"   ? SneMethod::lp3
                           : sne.method == "lp2" ? SneMethod::lp2
                                                 : SneMethod::rowgen;
        SneResult result = min_subsidy(game, tree, method);
        if (!sne.out.empty()) write_file(sne.out, save_subsidies(result.subsidies));
        bool verified = is_equilibrium_broadcast(game, tree, result.subsidies).ok;
        ordered_json j;
        j["total"] = rat_str(result.total);
        j["total_decimal"] = rat_decimal(result.total);
        j["method"] = sne.method;
        j["verified"] = verified;
        std::cout << j.dump() << "\n";
        return verified ? 0 : 2;
    }

    if (enforce_frac->parsed()) {
        BroadcastGame game = load_broadcast(frac.game);
        SpanningTree tree = frac.tree.empty() ? minimum_spanning_tree(game.graph, game.root)
                                              : load_tree_for(game, frac.tree);
        FractionalEnforcement result = enforce_fractional(game, tree);
        SubsidyAssignment b = to_assignment(result.subsidies, game.graph);
        if (!frac.out.empty()) write_file(frac.out, save_subsidies(b));
        bool verified =
            is_equilibrium_broadcast(game, tree, b, Rational(1, 1000000000)).ok;
        Rational tree_weight = wgt(game.graph, tree.edges());
        ordered_json j;
        j["total_decimal"] = dec(result.total);
        j["tree_weight"] = rat_str(tree_weight);
        j["spend_fraction_decimal"] = dec(result.total / tree_weight.get_d());
        j["verified"] = verified;
        std::cout << j.dump() << "\n";
        return verified ? 0 : 2;
    }

    if (solve_aon->parsed()) {
        BroadcastGame game = load_broadcast(aonc.game);
        SpanningTree tree = load_tree_for(game, aonc.tree);
        std::vector<EdgeId> candidates;
        if (aonc.candidates == "tree") {
            candidates = tree.edges();
        } else {
            for (const Edge& e : game.graph.edges())
                if (e.w == 1) candidates.push_back(e.id); // light edges by weight
        }
        auto result = min_integral_subsidy_exact(game, tree, candidates, aonc.cap, jobs);
        if (!result) {
            std::cout << "{\"found\":false}\n";
            return 2;
        }
        if (!aonc.out.empty()) write_file(aonc.out, save_subsidies(result->subsidies));
        bool verified = is_equilibrium_broadcast(game, tree, result->subsidies).ok;
        ordered_json j;
        j["found"] = true;
        j["total"] = rat_str(result->total);
        j["total_decimal"] = rat_decimal(result->total);
        j["edges"] = ordered_json::array();
        for (const auto& [e, v] : result->subsidies.entries()) j["edges"].push_back(e);
        j["verified"] = verified;
        std::cout << j.dump() << "\n";
        return verified ? 0 : 2;
    }

    if (pos->parsed()) {
        BroadcastGame game = load_broadcast(posc.game);
        auto best = best_equilibrium(game, posc.cap);
        if (!best) {
            std::cout << "{\"found\":false}\n";
            return 2;
        }
        Rational mst_weight = wgt(game.graph, minimum_spanning_tree(game.graph, game.root).edges());
        ordered_json j;
        j["pos"] = rat_str(best->weight / mst_weight);
        j["best_eq_weight"] = rat_str(best->weight);
        j["mst_weight"] = rat_str(mst_weight);
        std::cout << j.dump() << "\n";
        return 0;
    }

    if (best_eq->parsed()) {
        BroadcastGame game = load_broadcast(beq.game);
        auto best = best_equilibrium(game, beq.cap);
        if (!best) {
            std::cout << "{\"found\":false}\n";
            return 2;
        }
        ordered_json j;
        j["weight"] = rat_str(best->weight);
        j["weight_decimal"] = rat_decimal(best->weight);
        j["edges"] = best->tree_edges;
        std::cout << j.dump() << "\n";
        return 0;
    }

    if (dynamics->parsed()) {
        Game any = load_game(read_file(dyn.game));
        GeneralGame game = std::holds_alternative<BroadcastGame>(any)
                               ? as_general(std::get<BroadcastGame>(any))
                               : std::get<GeneralGame>(any);
        State start = initial_state(game);
        DynamicsResult result = best_response_dynamics(
            game, std::move(start), SubsidyAssignment{},
            dyn.seeded ? OrderPolicy::random_permutation : OrderPolicy::round_robin, dyn.seed,
            dyn.max_rounds);
        Verdict verdict = is_equilibrium_general(game, result.state, SubsidyAssignment{});
        ordered_json j;
        j["converged"] = result.converged;
        j["rounds"] = result.rounds;
        j["moves"] = result.moves;
        j["final_potential"] = rat_str(result.potential_trace.back());
        j["equilibrium"] = verdict.ok;
        std::cout << j.dump() << "\n";
        return result.converged && verdict.ok ? 0 : 2;
    }

    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const stabnet::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const stabnet::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const stabnet::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
