#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "dhpf/flow_tree.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using dhpf::FlowAssignment;
using dhpf::HarmonicFlowTree;
using dhpf::PotentialField;
using dhpf::WeightedGraph;

namespace {

FlowAssignment solved_flows(const WeightedGraph& g, PotentialField* field_out = nullptr) {
    PotentialField field = dhpf::solve_potentials(g);
    if (field_out) *field_out = field;
    return dhpf::compute_flows(g, field);
}

}  // namespace

TEST_CASE("max-flow trace from the start of the seven-vertex example") {
    WeightedGraph g = corpus::seven_vertex_example();
    FlowAssignment flows = solved_flows(g);
    dhpf::Path path = dhpf::trace_positive_path(g, flows, 1);
    CHECK(path.vertices == std::vector<int>{1, 6, 2, 3, 5});
    CHECK(path.cost == 8.0);
}

TEST_CASE("trace from the target is a zero-hop path") {
    WeightedGraph g = corpus::seven_vertex_example();
    FlowAssignment flows = solved_flows(g);
    dhpf::Path path = dhpf::trace_positive_path(g, flows, 5);
    CHECK(path.vertices == std::vector<int>{5});
    CHECK(path.cost == 0.0);
}

TEST_CASE("every trace on the example ends at the target within seven vertices") {
    WeightedGraph g = corpus::seven_vertex_example();
    FlowAssignment flows = solved_flows(g);
    for (int v = 1; v <= 7; ++v) {
        dhpf::Path path = dhpf::trace_positive_path(g, flows, v);
        CHECK(path.vertices.back() == 5);
        CHECK(path.vertices.size() <= 7);
        std::set<int> unique(path.vertices.begin(), path.vertices.end());
        CHECK(unique.size() == path.vertices.size());
    }
}

TEST_CASE("tracing a dead flow field fails loudly") {
    WeightedGraph g = corpus::seven_vertex_example();
    FlowAssignment flows;
    flows.edge_flow.assign(g.edges().size(), 0.0);
    CHECK_THROWS_AS(dhpf::trace_positive_path(g, flows, 1), dhpf::FlowTraceError);
}

TEST_CASE("flow tree of the seven-vertex example") {
    WeightedGraph g = corpus::seven_vertex_example();
    PotentialField field;
    FlowAssignment flows = solved_flows(g, &field);
    HarmonicFlowTree tree = dhpf::build_hft(g, flows);

    CHECK(tree.root_vertex() == 1);
    auto branches = tree.branches();
    CHECK(static_cast<int>(branches.size()) == tree.leaf_count);
    CHECK(tree.leaf_count == 6);

    SUBCASE("every leaf is the target and every branch decreases potential") {
        for (const auto& branch : branches) {
            CHECK(branch.vertices.front() == 1);
            CHECK(branch.vertices.back() == 5);
            for (std::size_t i = 1; i < branch.vertices.size(); ++i)
                CHECK(field.at(branch.vertices[i - 1]) > field.at(branch.vertices[i]));
        }
    }
    SUBCASE("the known branches are present") {
        auto has_branch = [&](const std::vector<int>& want) {
            return std::any_of(branches.begin(), branches.end(),
                               [&](const dhpf::Path& b) { return b.vertices == want; });
        };
        CHECK(has_branch({1, 6, 2, 3, 5}));
        CHECK(has_branch({1, 4, 7, 5}));
    }
    SUBCASE("the tree covers all vertices") {
        std::set<int> seen;
        for (const auto& node : tree.nodes) seen.insert(node.vertex);
        CHECK(seen == std::set<int>{1, 2, 3, 4, 5, 6, 7});
    }
    SUBCASE("children are ordered by vertex id") {
        const auto& root = tree.nodes[0];
        REQUIRE(root.children.size() == 2);
        CHECK(tree.nodes[root.children[0]].vertex == 4);
        CHECK(tree.nodes[root.children[1]].vertex == 6);
    }
}

TEST_CASE("two-vertex tree is a single edge") {
    WeightedGraph g = corpus::make_graph(2, {{1, 2, 3.0}}, 1, 2);
    HarmonicFlowTree tree = dhpf::build_hft(g, solved_flows(g));
    REQUIRE(tree.nodes.size() == 2);
    CHECK(tree.nodes[0].vertex == 1);
    CHECK(tree.nodes[1].vertex == 2);
    CHECK(tree.leaf_count == 1);
}

TEST_CASE("node cap aborts oversized expansions") {
    WeightedGraph g = corpus::seven_vertex_example();
    CHECK_THROWS_AS(dhpf::build_hft(g, solved_flows(g), 3), dhpf::HftCapError);
}

TEST_CASE("a cyclic flow assignment is rejected") {
    // Manual flows spinning around 2 -> 3 -> 4 -> 2 before the target.
    WeightedGraph g = corpus::make_graph(
        5, {{1, 2, 1.0}, {2, 3, 1.0}, {2, 4, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}}, 1, 5);
    FlowAssignment flows;
    // canonical edge order: (1,2) (2,3) (2,4) (3,4) (4,5)
    flows.edge_flow = {1.0, 1.0, -1.0, 1.0, 1.0};
    CHECK_THROWS_AS(dhpf::build_hft(g, flows), dhpf::FlowTraceError);
}

TEST_CASE("serialized tree lists vertices with cumulative costs") {
    WeightedGraph g = corpus::make_graph(2, {{1, 2, 3.0}}, 1, 2);
    CHECK(dhpf::serialize_hft(dhpf::build_hft(g, solved_flows(g))) ==
          "1 0.000000\n  2 3.000000\n");
}

TEST_CASE("tree properties hold on random graphs") {
    dhpf::SplitMix64 rng(31);
    for (int i = 0; i < 30; ++i) {
        int n = 4 + static_cast<int>(rng.bounded(7));
        WeightedGraph g = corpus::random_graph(rng, n);
        FlowAssignment flows = solved_flows(g);
        HarmonicFlowTree tree = dhpf::build_hft(g, flows);

        std::set<int> covered;
        double best_branch = oracle::kInf;
        for (const auto& branch : tree.branches()) {
            CHECK(branch.vertices.front() == g.source());
            CHECK(branch.vertices.back() == g.target());
            CHECK(branch.vertices.size() <= static_cast<std::size_t>(n));
            std::set<int> unique(branch.vertices.begin(), branch.vertices.end());
            CHECK(unique.size() == branch.vertices.size());
            covered.insert(branch.vertices.begin(), branch.vertices.end());
            best_branch = std::min(best_branch, branch.cost);
        }
        CHECK(static_cast<int>(covered.size()) == n);

        // The cheapest branch is the optimum.
        CHECK(best_branch ==
              doctest::Approx(oracle::exhaustive_best_cost(g, g.source(), g.target())));

        // Tracing from the start walks one branch of the tree.
        dhpf::Path traced = dhpf::trace_positive_path(g, flows, g.source());
        bool found = false;
        for (const auto& branch : tree.branches())
            if (branch.vertices == traced.vertices) found = true;
        CHECK(found);
    }
}
