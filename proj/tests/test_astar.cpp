#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dhpf/astar.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using dhpf::AStarConfig;
using dhpf::HeuristicMode;
using dhpf::SearchStats;
using dhpf::SolverConfig;
using dhpf::WeightedGraph;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest candidate-target cost once every other edge at parent is gone.
double stripped_oracle(const WeightedGraph& g, int parent, int candidate, int target) {
    dhpf::GraphData data = g.data();
    std::erase_if(data.edges, [&](const dhpf::GraphData::Edge& e) {
        bool at_parent = e.u == parent || e.v == parent;
        bool retained = (e.u == parent && e.v == candidate) || (e.u == candidate && e.v == parent);
        return at_parent && !retained;
    });
    if (!dhpf::connected(data, candidate, target)) return kInf;
    data.source = candidate;
    data.target = target;
    return oracle::dijkstra_cost(WeightedGraph(std::move(data)), candidate, target);
}

}  // namespace

TEST_CASE("a chain heuristic is exact") {
    // p - c - t with costs a, b: only one continuation, so the bound is b.
    WeightedGraph g = corpus::make_graph(3, {{1, 2, 3.5}, {2, 3, 1.25}}, 1, 3);
    CHECK(std::abs(dhpf::equivalent_cost_heuristic(g, 1, 2, 3) - 1.25) < 1e-9);
}

TEST_CASE("candidate equal to the target scores zero") {
    WeightedGraph g = corpus::make_graph(2, {{1, 2, 9.0}}, 1, 2);
    CHECK(dhpf::equivalent_cost_heuristic(g, 1, 2, 2) == 0.0);
}

TEST_CASE("the bound equals the retained-edge formula on a four-vertex graph") {
    // Expansion 1 -> 2 with target 4: strip the 1-3 edge, solve, and compare
    // 1/I - C against the port cost measured at the candidate directly.
    WeightedGraph g = corpus::make_graph(
        4, {{1, 2, 2.0}, {1, 3, 3.0}, {2, 4, 5.0}, {3, 4, 1.0}, {2, 3, 4.0}}, 1, 4);
    double h = dhpf::equivalent_cost_heuristic(g, 1, 2, 4);

    dhpf::GraphData stripped = g.data();
    std::erase_if(stripped.edges, [](const dhpf::GraphData::Edge& e) {
        return e.u == 1 && e.v == 3;
    });
    WeightedGraph modified(std::move(stripped));
    double port = dhpf::equivalent_cost(modified, 2, 4);
    CHECK(std::abs(h - port) < 1e-9);
    CHECK(h <= stripped_oracle(g, 1, 2, 4) + 1e-9);
    CHECK(h > 0.0);
}

TEST_CASE("severing the candidate from the target yields infinity") {
    // All routes from 2 to 4 pass through 1, so stripping 1 cuts them off.
    WeightedGraph g = corpus::make_graph(4, {{1, 2, 1.0}, {1, 3, 1.0}, {3, 4, 1.0}}, 1, 4);
    CHECK(dhpf::equivalent_cost_heuristic(g, 1, 2, 4) == kInf);
}

TEST_CASE("non-adjacent candidates are rejected") {
    WeightedGraph g = corpus::seven_vertex_example();
    CHECK_THROWS_AS(dhpf::equivalent_cost_heuristic(g, 1, 3, 5), std::invalid_argument);
}

TEST_CASE("search finds the optimum of the seven-vertex example") {
    WeightedGraph g = corpus::seven_vertex_example();
    dhpf::Path path = dhpf::astar_equivcost(g);
    CHECK(path.vertices == std::vector<int>{1, 6, 2, 3, 5});
    CHECK(path.cost == 8.0);
}

TEST_CASE("two-vertex search is immediate") {
    WeightedGraph g = corpus::make_graph(2, {{1, 2, 4.0}}, 1, 2);
    dhpf::Path path = dhpf::astar_equivcost(g);
    CHECK(path.vertices == std::vector<int>{1, 2});
    CHECK(path.cost == 4.0);
}

TEST_CASE("all heuristic modes return Dijkstra-optimal costs on random graphs") {
    dhpf::SplitMix64 rng(51);
    for (int i = 0; i < 30; ++i) {
        WeightedGraph g = corpus::random_graph(rng, 4 + static_cast<int>(rng.bounded(9)));
        double want = oracle::dijkstra_cost(g, g.source(), g.target());

        for (HeuristicMode mode :
             {HeuristicMode::parent_stripped, HeuristicMode::plain_equivalent,
              HeuristicMode::zero}) {
            AStarConfig config;
            config.heuristic = mode;
            dhpf::Path path = dhpf::astar_equivcost(g, {}, config);
            CHECK(path.cost == doctest::Approx(want).epsilon(1e-12));
        }

        AStarConfig full;
        full.strip_full_prefix = true;
        CHECK(dhpf::astar_equivcost(g, {}, full).cost == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("the bound is admissible for sampled expansions") {
    dhpf::SplitMix64 rng(52);
    SolverConfig direct;
    direct.method = dhpf::SolveMethod::direct_linear;
    for (int i = 0; i < 25; ++i) {
        WeightedGraph g = corpus::random_graph(rng, 4 + static_cast<int>(rng.bounded(9)));
        for (int p = 1; p <= g.vertex_count(); ++p) {
            if (p == g.target()) continue;
            for (const auto& nb : g.neighbors(p)) {
                if (nb.vertex == g.target()) continue;
                double h = dhpf::equivalent_cost_heuristic(g, p, nb.vertex, g.target(), direct);
                double truth = stripped_oracle(g, p, nb.vertex, g.target());
                if (truth == kInf)
                    CHECK(h == kInf);
                else
                    CHECK(h <= truth * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("the equivalent-cost bound expands no more vertices than the zero bound") {
    WeightedGraph g = corpus::seven_vertex_example();

    SearchStats with_bound;
    AStarConfig bound_config;
    dhpf::astar_equivcost(g, {}, bound_config, &with_bound);

    SearchStats zero;
    AStarConfig zero_config;
    zero_config.heuristic = HeuristicMode::zero;
    dhpf::astar_equivcost(g, {}, zero_config, &zero);

    CHECK(with_bound.expansions <= zero.expansions);
    CHECK(with_bound.heuristic_evaluations > 0);
}
