#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "dhpf/flow_tree.hpp"
#include "dhpf/graph.hpp"
#include "dhpf/solver.hpp"

namespace dhpf {

/// Per-vertex counts of incident edges carrying outward (pfi) and inward
/// (nfi) positive flow. The source has nfi = 0, the target pfi = 0.
struct FlowIndexTable {
    std::vector<int> pfi;  // indexed by vertex id; [0] unused
    std::vector<int> nfi;
};

FlowIndexTable compute_flow_indices(const WeightedGraph& graph, const FlowAssignment& flows);

/// Instrumented record of one indirect-relaxation run.
struct RelaxationLog {
    struct Route {
        int first_vertex = 0;       // first vertex after the junction
        std::vector<int> vertices;  // junction .. target
        double cost = 0.0;
        bool kept = false;
    };

    /// One junction relaxation: constructed routes, the retained one, and
    /// the first edges deleted from the losing routes. pfi/nfi snapshots are
    /// taken after the relaxation and its cascades settle.
    struct JunctionEvent {
        int junction = 0;
        int level = 0;  // backward hops from the target when detected
        std::vector<Route> routes;
        std::vector<std::pair<int, int>> deleted_edges;
        std::vector<int> pfi_after;
        std::vector<int> nfi_after;
    };

    /// A vertex lost its last inward flow and its outgoing edge was removed.
    struct CascadeEvent {
        int vertex = 0;
        std::pair<int, int> deleted_edge;
    };

    using Event = std::variant<JunctionEvent, CascadeEvent>;
    std::vector<Event> events;
};

struct MstarOptions {
    bool strict = false;          // re-solve the field after every relaxation
    RelaxationLog* log = nullptr;
};

/// Optimal path by pruning the harmonic flow tree bottom-up: at each parent,
/// starting from the deepest level, only the cheapest sub-branch survives.
Path mstar_direct(const WeightedGraph& graph, const SolverConfig& config = {});
Path mstar_direct_from_flows(const WeightedGraph& graph, const FlowAssignment& flows);

/// Optimal path by successive graph relaxation: repeatedly find the junction
/// nearest the target, race its forward routes, delete the losing first
/// edges, and cascade away vertices left without inflow, until a single
/// chain remains.
Path mstar_indirect(const WeightedGraph& graph, const SolverConfig& config = {},
                    const MstarOptions& options = {});
Path mstar_indirect_from_flows(const WeightedGraph& graph, const FlowAssignment& flows,
                               const SolverConfig& config = {},
                               const MstarOptions& options = {});

}  // namespace dhpf
