// Acceptance suite: every release criterion as one timed pass/fail line.
// Exit code is the number of failed criteria.

#include "stabnet/enforce.hpp"
#include "stabnet/game.hpp"
#include "stabnet/generators.hpp"
#include "stabnet/oracles.hpp"
#include "stabnet/sne.hpp"

#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

using namespace stabnet;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d [%s]: %s (%.2fs)%s%s\n", number, name.c_str(),
                ok ? "PASS" : "FAIL", seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

const double kE = std::exp(1.0);
const Rational kSlack(1, 1000000000); // 1e-9

} // namespace

int main() {
    criterion(1, "broadcast/general equilibrium agreement", [](std::string& detail) {
        testutil::Rng rng(101);
        int checked = 0;
        for (int round = 0; round < 1000; ++round) {
            BroadcastGame bg = testutil::random_broadcast_game(rng, 10);
            SpanningTree t = testutil::random_spanning_tree(bg.graph, bg.root, rng);
            SubsidyAssignment b = testutil::random_subsidies(bg.graph, rng);
            bool broadcast_ok = is_equilibrium_broadcast(bg, t, b).ok;
            bool general_ok =
                is_equilibrium_general(as_general(bg), State::from_tree(bg, t), b).ok;
            if (broadcast_ok != general_ok) {
                detail = "verdicts disagree at round " + std::to_string(round);
                return false;
            }
            ++checked;
        }
        detail = std::to_string(checked) + " games agreed exactly";
        return true;
    });

    criterion(2, "lp3 = lp2 = rowgen, grid dominates", [](std::string& detail) {
        testutil::Rng rng(103);
        int grid_compared = 0;
        for (int round = 0; round < 50; ++round) {
            // mix of sizes; the small ones also face the grid oracle
            BroadcastGame bg = testutil::random_broadcast_game(rng, round % 2 == 0 ? 5 : 7);
            SpanningTree t = testutil::random_spanning_tree(bg.graph, bg.root, rng);
            SneResult lp3 = min_subsidy(bg, t, SneMethod::lp3);
            SneResult lp2 = min_subsidy(bg, t, SneMethod::lp2);
            SneResult rowgen = min_subsidy(bg, t, SneMethod::rowgen);
            if (lp3.total != lp2.total || lp3.total != rowgen.total) {
                detail = "optima differ at round " + std::to_string(round);
                return false;
            }
            if (t.edges().size() <= 4) {
                if (lp3.total > grid_min_subsidy(bg, t, 12)) {
                    detail = "grid value below the LP optimum at round " + std::to_string(round);
                    return false;
                }
                ++grid_compared;
            }
        }
        detail = "50 instances, " + std::to_string(grid_compared) + " grid comparisons";
        return true;
    });

    criterion(3, "cycle family: optimum 5/6 and wgt/e spend", [](std::string& detail) {
        auto small = gen_cycle(3);
        if (min_subsidy(small.game, small.tree, SneMethod::lp3).total != Rational(5, 6)) {
            detail = "n=3 optimum is not 5/6";
            return false;
        }
        auto big = gen_cycle(1000);
        FractionalEnforcement r = enforce_fractional(big.game, big.tree);
        if (r.total < 1000.0 / kE - 3.0 || r.total > 1000.0 / kE + 1e-6) {
            detail = "n=1000 spend " + std::to_string(r.total) + " outside the window";
            return false;
        }
        detail = "n=1000 spend " + std::to_string(r.total) + " vs 1000/e = " +
                 std::to_string(1000.0 / kE);
        return true;
    });

    criterion(4, "constructive enforcement on random MSTs", [](std::string& detail) {
        testutil::Rng rng(107);
        for (int round = 0; round < 200; ++round) {
            BroadcastGame bg = testutil::random_broadcast_game(rng, 12);
            SpanningTree mst = minimum_spanning_tree(bg.graph, bg.root);
            FractionalEnforcement r = enforce_fractional(bg, mst);
            const double weight = wgt(bg.graph, mst.edges()).get_d();
            if (std::abs(r.total - weight / kE) > 1e-6 * std::max(1.0, weight)) {
                detail = "spend off wgt/e at round " + std::to_string(round);
                return false;
            }
            SubsidyAssignment b = to_assignment(r.subsidies, bg.graph);
            if (!is_equilibrium_broadcast(bg, mst, b, kSlack).ok) {
                detail = "equilibrium check failed at round " + std::to_string(round);
                return false;
            }
        }
        detail = "200 instances enforced at wgt(T)/e";
        return true;
    });

    criterion(5, "bin-packing biconditional at desk scale", [](std::string& detail) {
        auto yes = gen_binpack({2, 2, 4}, 2, 4);
        std::vector<int> packing{0, 0, 1};
        if (!is_equilibrium_broadcast(yes.game, yes.tree_for(packing), {}).ok) {
            detail = "a perfect packing failed the equilibrium check";
            return false;
        }
        auto no = gen_binpack({4, 4, 4}, 2, 6);
        int failures_seen = 0;
        for (int mask = 0; mask < 8; ++mask) {
            std::vector<int> assign{mask & 1, (mask >> 1) & 1, (mask >> 2) & 1};
            if (is_equilibrium_broadcast(no.game, no.tree_for(assign), {}).ok) {
                detail = "an unpackable assignment passed";
                return false;
            }
            ++failures_seen;
        }
        detail = "packing tree stable; all " + std::to_string(failures_seen) +
                 " infeasible assignments rejected";
        return true;
    });

    criterion(6, "independent-set reduction on K4", [](std::string& detail) {
        std::vector<std::pair<int, int>> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        auto inst = gen_indepset(4, k4, Rational(1, 12));
        SpanningTree empty_set = inst.branch_tree(std::vector<int>{});
        SpanningTree one_set = inst.branch_tree(std::vector<int>{0});
        if (wgt(inst.game.graph, empty_set.edges()) != Rational(10) ||
            wgt(inst.game.graph, one_set.edges()) != Rational(109, 12)) {
            detail = "branch-tree weights off";
            return false;
        }
        if (!is_equilibrium_broadcast(inst.game, empty_set, {}).ok ||
            !is_equilibrium_broadcast(inst.game, one_set, {}).ok) {
            detail = "branch trees should be equilibria";
            return false;
        }
        if (is_equilibrium_broadcast(inst.game, inst.type_c_tree(0, 1), {}).ok) {
            detail = "a type-C branch passed";
            return false;
        }
        auto best = best_equilibrium(inst.game, 1000000);
        if (!best || best->weight != Rational(109, 12)) {
            detail = "best equilibrium is not 109/12";
            return false;
        }
        detail = "best equilibrium 109/12 over full enumeration";
        return true;
    });

    criterion(7, "all-or-nothing gap on the n=20 path", [](std::string& detail) {
        auto inst = gen_aon_path(20);
        auto r = min_integral_subsidy_exact(inst.game, inst.tree, inst.tree.edges(), 24);
        if (!r) {
            detail = "no enforcing assignment found";
            return false;
        }
        if (r->total != 19 * inst.x) {
            detail = "minimum is not 19x";
            return false;
        }
        Rational ratio = r->total / wgt(inst.game.graph, inst.tree.edges());
        if (ratio < Rational(58, 100)) {
            detail = "ratio below 0.58";
            return false;
        }
        detail = "minimum 19x, ratio " + rat_decimal(ratio, 4) + " of wgt(T)";
        return true;
    });

    criterion(8, "3SAT-4 reduction structure", [](std::string& detail) {
        CnfFormula single;
        single.num_vars = 3;
        single.clauses.push_back({1, 2, 3});
        SatInstance one = gen_3sat4(single); // generator self-checks usage counts

        auto light_assignment = [](const SatInstance& inst, const std::set<EdgeId>& chosen) {
            SubsidyAssignment b(true);
            for (EdgeId e : chosen) b.set(e, inst.game.graph.edge(e).w);
            return b;
        };
        auto characterization = [](const SatInstance& inst, const std::set<EdgeId>& chosen) {
            std::map<int, std::vector<bool>> polarity;
            std::map<int, bool> clause_far;
            for (const auto& g : inst.gadgets) {
                int picked = static_cast<int>(chosen.count(g.light_near)) +
                             static_cast<int>(chosen.count(g.light_far));
                if (picked != 1) return false;
                polarity[g.var].push_back(chosen.count(g.light_far) == 1 ? g.positive
                                                                         : !g.positive);
                clause_far.try_emplace(g.clause, false);
                if (chosen.count(g.light_far)) clause_far[g.clause] = true;
            }
            for (const auto& [var, list] : polarity)
                for (bool b : list)
                    if (b != list.front()) return false;
            for (const auto& [c, ok] : clause_far)
                if (!ok) return false;
            return true;
        };

        std::vector<EdgeId> lights = one.catalog.all_light_edges();
        if (lights.size() != 6) {
            detail = "one clause must have six light edges";
            return false;
        }
        for (unsigned mask = 0; mask < 64; ++mask) {
            std::set<EdgeId> chosen;
            for (unsigned i = 0; i < 6; ++i)
                if (mask >> i & 1U) chosen.insert(lights[i]);
            bool eq =
                is_equilibrium_broadcast(one.game, one.tree, light_assignment(one, chosen)).ok;
            if (eq != characterization(one, chosen)) {
                detail = "characterization mismatch at mask " + std::to_string(mask);
                return false;
            }
        }

        CnfFormula two;
        two.num_vars = 5;
        two.clauses.push_back({1, 2, 3});
        two.clauses.push_back({-1, 4, 5});
        SatInstance pair = gen_3sat4(two);
        std::vector<EdgeId> pair_lights = pair.catalog.all_light_edges();
        if (pair_lights.size() != 12) {
            detail = "two clauses must have twelve light edges";
            return false;
        }
        long enforcing = 0;
        bool found_cost6 = false;
        for (unsigned mask = 0; mask < (1U << 12); ++mask) {
            std::set<EdgeId> chosen;
            for (unsigned i = 0; i < 12; ++i)
                if (mask >> i & 1U) chosen.insert(pair_lights[i]);
            bool eq =
                is_equilibrium_broadcast(pair.game, pair.tree, light_assignment(pair, chosen)).ok;
            if (!eq) continue;
            ++enforcing;
            if (chosen.size() == 6) found_cost6 = true;
            if (!characterization(pair, chosen)) {
                detail = "an enforcing assignment is not consistent balanced";
                return false;
            }
        }
        if (!found_cost6 || enforcing == 0) {
            detail = "no cost-6 enforcing light assignment";
            return false;
        }
        detail = std::to_string(enforcing) + " enforcing light assignments, all consistent";
        return true;
    });

    criterion(9, "virtual-cost inequalities", [](std::string& detail) {
        testutil::Rng rng(109);
        // claim 1: vc(a,y) >= (c-y)/n_a on random {0,1}-weight MSTs
        int samples = 0;
        while (samples < 10000) {
            BroadcastGame base = testutil::random_broadcast_game(rng, 9);
            std::vector<Edge> edges;
            for (const Edge& e : base.graph.edges())
                edges.push_back({e.id, e.u, e.v, rng.chance(0.3) ? Rational(0) : Rational(1)});
            BroadcastGame g{Graph(std::vector<std::string>(base.graph.labels()), std::move(edges)),
                            base.root};
            SpanningTree mst = minimum_spanning_tree(g.graph, g.root);
            auto levels = decompose(g.graph, mst);
            if (levels.empty()) continue;
            const Level& level = levels[0];
            const double c = level.increment.get_d();
            for (EdgeId e : mst.edges()) {
                if (!level.heavy[static_cast<std::size_t>(e)]) continue;
                double y = c * static_cast<double>(rng.next(0, 1000)) / 1000.0;
                double vc = virtual_cost(level, e, y);
                if (vc < (c - y) / static_cast<double>(mst.usage(e)) - 1e-12) {
                    detail = "claim-1 inequality failed";
                    return false;
                }
                ++samples;
            }
        }
        // claim 2: packed consecutive-usage paths match the closed form
        for (int round = 0; round < 200; ++round) {
            const long n = rng.next(2, 12);
            std::vector<std::string> labels{"r"};
            std::vector<Edge> edges;
            for (long i = 0; i < n; ++i) {
                labels.push_back("v" + std::to_string(i + 1));
                edges.push_back({static_cast<EdgeId>(i), static_cast<NodeId>(i),
                                 static_cast<NodeId>(i + 1), Rational(1)});
            }
            BroadcastGame g{Graph(std::move(labels), std::move(edges)), 0};
            std::vector<EdgeId> ids;
            for (EdgeId e = 0; e < g.graph.edge_count(); ++e) ids.push_back(e);
            SpanningTree t(g.graph, 0, ids);
            const Level& level = decompose(g.graph, t)[0];
            double y_total =
                (static_cast<double>(rng.next(1, 1000)) / 1000.0) * static_cast<double>(n);
            std::vector<double> y(static_cast<std::size_t>(n), 0.0);
            double left = y_total;
            for (long i = n - 1; i >= 0 && left > 0; --i) {
                y[static_cast<std::size_t>(i)] = std::min(left, 1.0);
                left -= y[static_cast<std::size_t>(i)];
            }
            double sum_vc = 0;
            for (long i = 0; i < n; ++i)
                sum_vc += virtual_cost(level, static_cast<EdgeId>(i),
                                       y[static_cast<std::size_t>(i)]);
            double closed = std::log(static_cast<double>(n) / y_total);
            if (std::abs(sum_vc - closed) > 1e-9) {
                detail = "claim-2 closed form off at round " + std::to_string(round);
                return false;
            }
        }
        detail = "10000 claim-1 samples, 200 claim-2 paths";
        return true;
    });

    criterion(10, "potential identity and dynamics", [](std::string& detail) {
        testutil::Rng rng(113);
        int deviations = 0;
        while (deviations < 100) {
            BroadcastGame bg = testutil::random_broadcast_game(rng, 8);
            GeneralGame g = as_general(bg);
            SpanningTree t = testutil::random_spanning_tree(bg.graph, bg.root, rng);
            State s = State::from_tree(bg, t);
            SubsidyAssignment b = testutil::random_subsidies(bg.graph, rng);
            int player = static_cast<int>(rng.next(0, g.player_count() - 1));
            auto alt = testutil::random_simple_path(
                g.graph, g.pairs[static_cast<std::size_t>(player)].source,
                g.pairs[static_cast<std::size_t>(player)].sink, rng);
            Rational phi0 = rosenthal_potential(g, s, b);
            Rational cost0 = player_cost(g, s, b, player);
            s.set_path(player, alt);
            if (rosenthal_potential(g, s, b) - phi0 != player_cost(g, s, b, player) - cost0) {
                detail = "potential identity failed";
                return false;
            }
            ++deviations;
        }
        for (int round = 0; round < 30; ++round) {
            BroadcastGame bg = testutil::random_broadcast_game(rng, 8);
            GeneralGame g = as_general(bg);
            SpanningTree t = testutil::random_spanning_tree(bg.graph, bg.root, rng);
            SubsidyAssignment b = testutil::random_subsidies(bg.graph, rng);
            DynamicsResult r = best_response_dynamics(
                g, State::from_tree(bg, t), b,
                round % 2 == 0 ? OrderPolicy::round_robin : OrderPolicy::random_permutation,
                static_cast<std::uint64_t>(round), 1000);
            if (!r.converged || !is_equilibrium_general(g, r.state, b).ok) {
                detail = "dynamics did not settle at an equilibrium";
                return false;
            }
            for (std::size_t i = 1; i < r.potential_trace.size(); ++i)
                if (r.potential_trace[i] >= r.potential_trace[i - 1]) {
                    detail = "potential trace is not strictly decreasing";
                    return false;
                }
        }
        detail = "100 deviations exact, 30 dynamics runs converged";
        return true;
    });

    if (failures == 0) std::printf("all criteria passed\n");
    return failures;
}
