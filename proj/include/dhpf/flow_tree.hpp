#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dhpf/graph.hpp"
#include "dhpf/solver.hpp"

namespace dhpf {

/// Picks the next hop among a vertex's positive outgoing flows.
/// Candidates arrive as (neighbor, flow) pairs in ascending neighbor order.
using FlowChooser = std::function<int(int vertex, const std::vector<std::pair<int, double>>&)>;

/// Largest outgoing flow; ties break to the lowest neighbor id.
int max_flow_chooser(int vertex, const std::vector<std::pair<int, double>>& candidates);

/// Positive-flow walk hit a dead end or a cycle: the flow field is not a
/// converged balance solution.
class FlowTraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Follows a positive outgoing flow from start until the target. The result
/// is loop-free with strictly decreasing potentials along it.
Path trace_positive_path(const WeightedGraph& graph, const FlowAssignment& flows, int start,
                         const FlowChooser& chooser = max_flow_chooser);

/// Tree of every positive-flow path out of the source. The root holds the
/// source vertex and every leaf holds the target; all graph vertices appear
/// somewhere in the tree.
struct HarmonicFlowTree {
    struct Node {
        int vertex = 0;
        double edge_cost = 0.0;      // cost of the edge from the parent; 0 at the root
        int parent = -1;             // node index; -1 at the root
        std::vector<int> children;   // node indices, ascending child vertex id
    };

    std::vector<Node> nodes;  // nodes[0] is the root
    int leaf_count = 0;

    int root_vertex() const { return nodes.front().vertex; }
    /// Every root-to-leaf path with its cumulative cost, in child order.
    std::vector<Path> branches() const;
};

/// Grew past the configured node cap; use the indirect planner instead.
class HftCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Depth-first expansion from the source along every positive flow.
HarmonicFlowTree build_hft(const WeightedGraph& graph, const FlowAssignment& flows,
                           std::size_t node_cap = 1'000'000);

/// Indented text, one vertex per line with the cumulative branch cost.
std::string serialize_hft(const HarmonicFlowTree& tree);

}  // namespace dhpf
