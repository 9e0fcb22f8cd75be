#include "dhpf/astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

namespace dhpf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Copy of the graph data with every edge at each stripped vertex removed,
// except the single retained edge (keep_u, keep_v).
GraphData strip_vertices(const WeightedGraph& graph, const std::vector<int>& stripped,
                         int keep_u, int keep_v) {
    std::vector<char> is_stripped(static_cast<std::size_t>(graph.vertex_count()) + 1, 0);
    for (int v : stripped) is_stripped[static_cast<std::size_t>(v)] = 1;

    GraphData data;
    data.vertex_count = graph.vertex_count();
    data.source = graph.source();
    data.target = graph.target();
    for (const auto& e : graph.edges()) {
        bool retained = (e.u == keep_u && e.v == keep_v) || (e.u == keep_v && e.v == keep_u);
        if (retained || (!is_stripped[static_cast<std::size_t>(e.u)] &&
                         !is_stripped[static_cast<std::size_t>(e.v)]))
            data.edges.push_back(e);
    }
    return data;
}

double stripped_bound(const WeightedGraph& graph, const std::vector<int>& stripped,
                      int expanded_from, int candidate, int target,
                      const SolverConfig& config) {
    double retained_cost = graph.edge_cost(expanded_from, candidate);
    GraphData data = strip_vertices(graph, stripped, expanded_from, candidate);
    if (!connected(data, candidate, target)) return kInf;

    // The stripped graph still satisfies every structural invariant and the
    // boundary pair lives in one component, so construction cannot throw.
    data.source = expanded_from;
    data.target = target;
    WeightedGraph modified{std::move(data)};
    PotentialField field = solve_boundary(modified, expanded_from, target, config);

    // All injected current crosses the one retained edge, so the bound for
    // the candidate is the port cost minus that edge: 1/I - C.
    double retained_flow = (1.0 - field.at(candidate)) / retained_cost;
    return std::max(1.0 / retained_flow - retained_cost, 0.0);
}

}  // namespace

double equivalent_cost_heuristic(const WeightedGraph& graph, int expanded_from, int candidate,
                                 int target, const SolverConfig& config) {
    if (candidate == target) return 0.0;
    if (!graph.edge_index(expanded_from, candidate))
        throw std::invalid_argument("candidate " + std::to_string(candidate) +
                                    " is not adjacent to " + std::to_string(expanded_from));
    return stripped_bound(graph, {expanded_from}, expanded_from, candidate, target, config);
}

Path astar_equivcost(const WeightedGraph& graph, const SolverConfig& config,
                     const AStarConfig& astar, SearchStats* stats) {
    const int n = graph.vertex_count();
    const int source = graph.source();
    const int target = graph.target();

    SearchStats local;
    SearchStats& st = stats ? *stats : local;

    std::unordered_map<long long, double> pair_memo;  // (parent, candidate) -> h
    std::unordered_map<int, double> vertex_memo;      // candidate -> h (plain mode)

    auto heuristic = [&](int parent, int candidate, const std::vector<int>& prefix) -> double {
        switch (astar.heuristic) {
            case HeuristicMode::zero:
                return 0.0;
            case HeuristicMode::plain_equivalent: {
                if (candidate == target) return 0.0;
                auto it = vertex_memo.find(candidate);
                if (it != vertex_memo.end()) return it->second;
                ++st.heuristic_evaluations;
                double h = equivalent_cost(graph, candidate, target, config);
                vertex_memo.emplace(candidate, h);
                return h;
            }
            case HeuristicMode::parent_stripped:
            default: {
                if (candidate == target) return 0.0;
                if (astar.strip_full_prefix) {
                    ++st.heuristic_evaluations;
                    return stripped_bound(graph, prefix, parent, candidate, target, config);
                }
                long long key = static_cast<long long>(parent) * (n + 1) + candidate;
                auto it = pair_memo.find(key);
                if (it != pair_memo.end()) return it->second;
                ++st.heuristic_evaluations;
                double h = equivalent_cost_heuristic(graph, parent, candidate, target, config);
                pair_memo.emplace(key, h);
                return h;
            }
        }
    };

    std::vector<double> g_score(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
    std::vector<char> closed(static_cast<std::size_t>(n) + 1, 0);

    struct Entry {
        double f;
        int vertex;
        double g;
        bool operator>(const Entry& other) const {
            if (f != other.f) return f > other.f;
            if (vertex != other.vertex) return vertex > other.vertex;
            return g > other.g;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

    g_score[static_cast<std::size_t>(source)] = 0.0;
    open.push({0.0, source, 0.0});

    auto prefix_of = [&](int v) {
        std::vector<int> chain;
        for (int cur = v; cur != 0; cur = parent[static_cast<std::size_t>(cur)]) {
            chain.push_back(cur);
            if (cur == source) break;
        }
        return chain;
    };

    while (!open.empty()) {
        Entry top = open.top();
        open.pop();
        if (top.g > g_score[static_cast<std::size_t>(top.vertex)]) continue;  // stale

        if (top.vertex == target) {
            Path path;
            for (int cur = target; cur != 0; cur = parent[static_cast<std::size_t>(cur)]) {
                path.vertices.push_back(cur);
                if (cur == source) break;
            }
            std::reverse(path.vertices.begin(), path.vertices.end());
            path.cost = path_cost(graph, path.vertices);
            return path;
        }

        closed[static_cast<std::size_t>(top.vertex)] = 1;
        ++st.expansions;
        std::vector<int> prefix;
        if (astar.strip_full_prefix && astar.heuristic == HeuristicMode::parent_stripped)
            prefix = prefix_of(top.vertex);

        for (const auto& nb : graph.neighbors(top.vertex)) {
            double tentative = top.g + nb.cost;
            if (tentative >= g_score[static_cast<std::size_t>(nb.vertex)]) continue;
            double h = heuristic(top.vertex, nb.vertex, prefix);
            if (h == kInf) continue;  // severed from the target on this expansion
            g_score[static_cast<std::size_t>(nb.vertex)] = tentative;
            parent[static_cast<std::size_t>(nb.vertex)] = top.vertex;
            if (closed[static_cast<std::size_t>(nb.vertex)]) {
                // The bound is admissible but not consistent, so a cheaper
                // route can surface after a vertex was expanded.
                closed[static_cast<std::size_t>(nb.vertex)] = 0;
                ++st.reopenings;
            }
            open.push({tentative + h, nb.vertex, tentative});
        }
    }
    throw SolveError("search exhausted without reaching the target", 0.0);
}

}  // namespace dhpf
