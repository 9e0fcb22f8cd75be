#include "dhpf/flow_tree.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace dhpf {

int max_flow_chooser(int, const std::vector<std::pair<int, double>>& candidates) {
    // Candidates come in ascending id order, so a strict comparison keeps
    // the lowest id on exact ties.
    int best = candidates.front().first;
    double best_flow = candidates.front().second;
    for (const auto& [vertex, flow] : candidates) {
        if (flow > best_flow) {
            best = vertex;
            best_flow = flow;
        }
    }
    return best;
}

Path trace_positive_path(const WeightedGraph& graph, const FlowAssignment& flows, int start,
                         const FlowChooser& chooser) {
    if (!graph.valid_vertex(start))
        throw std::out_of_range("unknown vertex id " + std::to_string(start));

    Path path;
    path.vertices.push_back(start);
    std::vector<char> visited(static_cast<std::size_t>(graph.vertex_count()) + 1, 0);
    visited[static_cast<std::size_t>(start)] = 1;

    int current = start;
    while (current != graph.target()) {
        auto out = flows.positive_out(graph, current);
        if (out.empty())
            throw FlowTraceError("no positive outgoing flow at vertex " + std::to_string(current) +
                                 "; flow field is not converged");
        int next = chooser(current, out);
        if (visited[static_cast<std::size_t>(next)])
            throw FlowTraceError("positive-flow walk revisited vertex " + std::to_string(next) +
                                 "; flow field is not converged");
        visited[static_cast<std::size_t>(next)] = 1;
        path.cost += graph.edge_cost(current, next);
        path.vertices.push_back(next);
        current = next;
    }
    return path;
}

HarmonicFlowTree build_hft(const WeightedGraph& graph, const FlowAssignment& flows,
                           std::size_t node_cap) {
    HarmonicFlowTree tree;
    tree.nodes.push_back({graph.source(), 0.0, -1, {}});

    // Depth-first expansion; on_path guards against cycles from a bad field.
    std::vector<char> on_path(static_cast<std::size_t>(graph.vertex_count()) + 1, 0);

    struct Frame {
        int node;
        std::vector<std::pair<int, double>> out;
        std::size_t next = 0;
    };
    std::vector<Frame> stack;
    on_path[static_cast<std::size_t>(graph.source())] = 1;
    if (graph.source() != graph.target())
        stack.push_back({0, flows.positive_out(graph, graph.source())});

    while (!stack.empty()) {
        Frame& frame = stack.back();
        int vertex = tree.nodes[static_cast<std::size_t>(frame.node)].vertex;
        if (frame.out.empty())
            throw FlowTraceError("no positive outgoing flow at vertex " + std::to_string(vertex) +
                                 "; flow field is not converged");
        if (frame.next == frame.out.size()) {
            on_path[static_cast<std::size_t>(vertex)] = 0;
            stack.pop_back();
            continue;
        }
        int child_vertex = frame.out[frame.next++].first;
        if (on_path[static_cast<std::size_t>(child_vertex)])
            throw FlowTraceError("cycle through vertex " + std::to_string(child_vertex) +
                                 " during tree expansion; flow field is not converged");

        if (tree.nodes.size() >= node_cap)
            throw HftCapError("flow tree exceeded the node cap of " + std::to_string(node_cap));
        int child_node = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(
            {child_vertex, graph.edge_cost(vertex, child_vertex), frame.node, {}});
        tree.nodes[static_cast<std::size_t>(frame.node)].children.push_back(child_node);

        if (child_vertex == graph.target()) {
            ++tree.leaf_count;
        } else {
            on_path[static_cast<std::size_t>(child_vertex)] = 1;
            stack.push_back({child_node, flows.positive_out(graph, child_vertex)});
        }
    }
    return tree;
}

std::vector<Path> HarmonicFlowTree::branches() const {
    std::vector<Path> result;
    std::vector<int> chain;
    std::vector<double> cost_to;  // cumulative cost at each node of the chain

    // Iterative preorder walk collecting root-to-leaf paths.
    struct Frame {
        int node;
        std::size_t next_child = 0;
    };
    std::vector<Frame> stack{{0}};
    chain.push_back(nodes[0].vertex);
    cost_to.push_back(0.0);

    while (!stack.empty()) {
        Frame& frame = stack.back();
        const Node& node = nodes[static_cast<std::size_t>(frame.node)];
        if (node.children.empty() && frame.next_child == 0) {
            result.push_back({chain, cost_to.back()});
            frame.next_child = 1;  // mark emitted
        }
        if (frame.next_child >= node.children.size() || node.children.empty()) {
            chain.pop_back();
            cost_to.pop_back();
            stack.pop_back();
            continue;
        }
        int child = node.children[frame.next_child++];
        const Node& child_node = nodes[static_cast<std::size_t>(child)];
        chain.push_back(child_node.vertex);
        cost_to.push_back(cost_to.back() + child_node.edge_cost);
        stack.push_back({child});
    }
    return result;
}

std::string serialize_hft(const HarmonicFlowTree& tree) {
    std::ostringstream out;
    struct Frame {
        int node;
        int depth;
        double cost;
    };
    std::vector<Frame> stack{{0, 0, 0.0}};
    while (!stack.empty()) {
        Frame frame = stack.back();
        stack.pop_back();
        const auto& node = tree.nodes[static_cast<std::size_t>(frame.node)];
        char line[64];
        std::snprintf(line, sizeof line, "%*s%d %.6f\n", frame.depth * 2, "", node.vertex,
                      frame.cost);
        out << line;
        // Push children reversed so they emit in ascending vertex order.
        for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
            const auto& child = tree.nodes[static_cast<std::size_t>(*it)];
            stack.push_back({*it, frame.depth + 1, frame.cost + child.edge_cost});
        }
    }
    return out.str();
}

}  // namespace dhpf
