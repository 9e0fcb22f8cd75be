#include "dhpf/mstar.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace dhpf {

FlowIndexTable compute_flow_indices(const WeightedGraph& graph, const FlowAssignment& flows) {
    FlowIndexTable table;
    table.pfi.assign(static_cast<std::size_t>(graph.vertex_count()) + 1, 0);
    table.nfi.assign(static_cast<std::size_t>(graph.vertex_count()) + 1, 0);
    for (std::size_t idx = 0; idx < graph.edges().size(); ++idx) {
        const auto& e = graph.edges()[idx];
        double f = flows.edge_flow[idx];
        if (flows.positive(f)) {
            ++table.pfi[static_cast<std::size_t>(e.u)];
            ++table.nfi[static_cast<std::size_t>(e.v)];
        } else if (flows.positive(-f)) {
            ++table.pfi[static_cast<std::size_t>(e.v)];
            ++table.nfi[static_cast<std::size_t>(e.u)];
        }
    }
    return table;
}

// ---------------- direct realization ----------------

Path mstar_direct_from_flows(const WeightedGraph& graph, const FlowAssignment& flows) {
    HarmonicFlowTree tree = build_hft(graph, flows);
    const auto& nodes = tree.nodes;

    std::vector<int> depth(nodes.size(), 0);
    int max_depth = 0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        depth[i] = depth[static_cast<std::size_t>(nodes[i].parent)] + 1;
        max_depth = std::max(max_depth, depth[i]);
    }

    // Bottom-up branch retention: walk parent levels from the deepest up,
    // keeping at each node only the cheapest sub-branch to the target.
    std::vector<double> best(nodes.size(), 0.0);
    std::vector<int> retained(nodes.size(), -1);
    for (int level = max_depth - 1; level >= 0; --level) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (depth[i] != level || nodes[i].children.empty()) continue;
            double best_cost = std::numeric_limits<double>::infinity();
            int keep = -1;
            for (int child : nodes[i].children) {
                double cost = nodes[static_cast<std::size_t>(child)].edge_cost +
                              best[static_cast<std::size_t>(child)];
                if (cost < best_cost) {  // children ascend by vertex id, ties keep the lowest
                    best_cost = cost;
                    keep = child;
                }
            }
            best[i] = best_cost;
            retained[i] = keep;
        }
    }

    Path path;
    path.vertices.push_back(nodes[0].vertex);
    for (int node = retained[0]; node != -1; node = retained[static_cast<std::size_t>(node)]) {
        path.vertices.push_back(nodes[static_cast<std::size_t>(node)].vertex);
        path.cost += nodes[static_cast<std::size_t>(node)].edge_cost;
    }
    return path;
}

Path mstar_direct(const WeightedGraph& graph, const SolverConfig& config) {
    PotentialField field = solve_potentials(graph, config);
    FlowAssignment flows = compute_flows(graph, field, config.flow_epsilon);
    return mstar_direct_from_flows(graph, flows);
}

// ---------------- indirect realization ----------------

namespace {

// Mutable relaxation state over an immutable graph: an aliveness mask plus
// the flow index bookkeeping that drives the procedure.
struct Relaxation {
    const WeightedGraph& graph;
    const FlowAssignment& flows;
    std::vector<char> edge_alive;
    FlowIndexTable indices;
    RelaxationLog* log;

    Relaxation(const WeightedGraph& g, const FlowAssignment& f, RelaxationLog* l)
        : graph(g),
          flows(f),
          edge_alive(g.edges().size(), 1),
          indices(compute_flow_indices(g, f)),
          log(l) {}

    bool alive_positive(int from, const WeightedGraph::Neighbor& n, double& flow_out) const {
        if (!edge_alive[static_cast<std::size_t>(n.edge)]) return false;
        const auto& e = graph.edges()[static_cast<std::size_t>(n.edge)];
        double f = e.u == from ? flows.edge_flow[static_cast<std::size_t>(n.edge)]
                               : -flows.edge_flow[static_cast<std::size_t>(n.edge)];
        if (!flows.positive(f)) return false;
        flow_out = f;
        return true;
    }

    std::vector<int> positive_out(int v) const {
        std::vector<int> out;
        double f;
        for (const auto& n : graph.neighbors(v))
            if (alive_positive(v, n, f)) out.push_back(n.vertex);
        return out;
    }

    std::vector<int> positive_in(int v) const {
        std::vector<int> in;
        double f;
        for (const auto& n : graph.neighbors(v))
            if (alive_positive(n.vertex, n, f)) in.push_back(n.vertex);
        return in;
    }

    void delete_edge(int u, int v) {
        auto idx = graph.edge_index(u, v);
        edge_alive[static_cast<std::size_t>(*idx)] = 0;
        --indices.pfi[static_cast<std::size_t>(u)];
        --indices.nfi[static_cast<std::size_t>(v)];
    }

    // Junction vertices (pfi >= 2) found by breadth-first backward walk from
    // the target along inward flows, with their hop levels.
    std::vector<std::pair<int, int>> junctions_by_level() const {
        std::vector<int> level(static_cast<std::size_t>(graph.vertex_count()) + 1, -1);
        std::deque<int> queue{graph.target()};
        level[static_cast<std::size_t>(graph.target())] = 0;
        std::vector<std::pair<int, int>> found;  // (level, vertex)
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int pred : positive_in(v)) {
                if (level[static_cast<std::size_t>(pred)] != -1) continue;
                level[static_cast<std::size_t>(pred)] = level[static_cast<std::size_t>(v)] + 1;
                if (indices.pfi[static_cast<std::size_t>(pred)] >= 2)
                    found.emplace_back(level[static_cast<std::size_t>(pred)], pred);
                queue.push_back(pred);
            }
        }
        std::sort(found.begin(), found.end());
        return found;
    }

    // Forward route from a junction through single-outflow vertices to the
    // target. Returns false when the route meets another junction first, in
    // which case the caller defers this junction to a later round.
    bool forward_route(int junction, int first, RelaxationLog::Route& route) const {
        route.first_vertex = first;
        route.vertices = {junction, first};
        route.cost = graph.edge_cost(junction, first);
        int current = first;
        while (current != graph.target()) {
            if (indices.pfi[static_cast<std::size_t>(current)] >= 2) return false;
            auto out = positive_out(current);
            if (out.size() != 1)
                throw SolveError("flow index bookkeeping desynchronized at vertex " +
                                     std::to_string(current),
                                 0.0);
            int next = out.front();
            route.cost += graph.edge_cost(current, next);
            route.vertices.push_back(next);
            current = next;
        }
        return true;
    }

    // Steps 7-8: peel off any vertex whose inflow count reached zero.
    void cascade(std::deque<int> pending) {
        while (!pending.empty()) {
            int v = pending.front();
            pending.pop_front();
            if (v == graph.source() || v == graph.target()) continue;
            if (indices.nfi[static_cast<std::size_t>(v)] != 0) continue;
            for (int next : positive_out(v)) {
                delete_edge(v, next);
                if (log) log->events.push_back(RelaxationLog::CascadeEvent{v, {v, next}});
                pending.push_back(next);
            }
        }
    }

    // Processes the most target-near junction whose routes are all
    // traceable. Returns false when no junction remains.
    bool relax_once() {
        auto junctions = junctions_by_level();
        if (junctions.empty()) return false;

        for (const auto& [level, junction] : junctions) {
            std::vector<RelaxationLog::Route> routes;
            bool deferred = false;
            for (int first : positive_out(junction)) {
                RelaxationLog::Route route;
                if (!forward_route(junction, first, route)) {
                    deferred = true;
                    break;
                }
                routes.push_back(std::move(route));
            }
            if (deferred) continue;

            // Keep the cheapest route; first-vertex ascending order makes
            // the strict comparison break ties toward the lowest id.
            std::size_t keep = 0;
            for (std::size_t r = 1; r < routes.size(); ++r)
                if (routes[r].cost < routes[keep].cost) keep = r;
            routes[keep].kept = true;

            RelaxationLog::JunctionEvent event;
            event.junction = junction;
            event.level = level;
            std::deque<int> decremented;
            for (std::size_t r = 0; r < routes.size(); ++r) {
                if (r == keep) continue;
                delete_edge(junction, routes[r].first_vertex);
                event.deleted_edges.emplace_back(junction, routes[r].first_vertex);
                decremented.push_back(routes[r].first_vertex);
            }
            std::size_t event_slot = 0;
            if (log) {
                event.routes = routes;
                log->events.emplace_back(std::move(event));
                event_slot = log->events.size() - 1;
            }
            cascade(std::move(decremented));
            if (log) {
                auto& slot = std::get<RelaxationLog::JunctionEvent>(log->events[event_slot]);
                slot.pfi_after = indices.pfi;
                slot.nfi_after = indices.nfi;
            }
            return true;
        }
        throw SolveError("no junction vertex is traceable; flow field is not converged", 0.0);
    }

    Path extract_path() const {
        Path path;
        path.vertices.push_back(graph.source());
        int current = graph.source();
        int guard = graph.vertex_count();
        while (current != graph.target()) {
            auto out = positive_out(current);
            if (out.size() != 1 || guard-- < 0)
                throw SolveError("relaxation did not leave a single chain at vertex " +
                                     std::to_string(current),
                                 0.0);
            path.cost += graph.edge_cost(current, out.front());
            path.vertices.push_back(out.front());
            current = out.front();
        }
        return path;
    }
};

GraphData alive_subgraph(const WeightedGraph& graph, const std::vector<char>& edge_alive) {
    GraphData data;
    data.vertex_count = graph.vertex_count();
    data.source = graph.source();
    data.target = graph.target();
    for (std::size_t idx = 0; idx < graph.edges().size(); ++idx)
        if (edge_alive[idx]) data.edges.push_back(graph.edges()[idx]);
    return data;
}

}  // namespace

Path mstar_indirect_from_flows(const WeightedGraph& graph, const FlowAssignment& flows,
                               const SolverConfig& config, const MstarOptions& options) {
    if (!options.strict) {
        Relaxation relax(graph, flows, options.log);
        long guard = static_cast<long>(graph.vertex_count()) * graph.vertex_count() + 1;
        while (relax.relax_once()) {
            if (--guard < 0)
                throw SolveError("relaxation failed to terminate; flow index bookkeeping bug",
                                 0.0);
        }
        return relax.extract_path();
    }

    // Strict mode: after each relaxation, rebuild the surviving graph and
    // re-solve the field so the indices always reflect true flow signs.
    WeightedGraph current = graph;
    FlowAssignment current_flows = flows;
    long guard = static_cast<long>(graph.vertex_count()) * graph.vertex_count() + 1;
    while (true) {
        Relaxation relax(current, current_flows, options.log);
        if (!relax.relax_once()) return relax.extract_path();
        if (--guard < 0)
            throw SolveError("relaxation failed to terminate; flow index bookkeeping bug", 0.0);
        current = WeightedGraph(alive_subgraph(current, relax.edge_alive));
        PotentialField field = solve_potentials(current, config);
        current_flows = compute_flows(current, field, config.flow_epsilon);
    }
}

Path mstar_indirect(const WeightedGraph& graph, const SolverConfig& config,
                    const MstarOptions& options) {
    PotentialField field = solve_potentials(graph, config);
    FlowAssignment flows = compute_flows(graph, field, config.flow_epsilon);
    return mstar_indirect_from_flows(graph, flows, config, options);
}

}  // namespace dhpf
