#pragma once

#include "dhpf/graph.hpp"
#include "dhpf/solver.hpp"

namespace dhpf {

enum class HeuristicMode {
    parent_stripped,   // strip the expanded vertex's other edges, then port equivalent cost
    plain_equivalent,  // equivalent cost on the unmodified graph
    zero,              // uniform-cost search
};

struct AStarConfig {
    HeuristicMode heuristic = HeuristicMode::parent_stripped;
    // Strip every vertex on the current path instead of just the parent.
    bool strip_full_prefix = false;
};

struct SearchStats {
    long expansions = 0;
    long heuristic_evaluations = 0;  // balance solves, not memo hits
    long reopenings = 0;
};

/// Lower bound on the candidate-to-target cost for an expansion across the
/// edge (expanded_from, candidate): remove every other edge at
/// expanded_from, pin V[expanded_from] = 1 and V[target] = 0, solve, and
/// read the bound off the retained edge as 1/I - C. Returns +infinity when
/// the removal cuts the candidate off from the target.
double equivalent_cost_heuristic(const WeightedGraph& graph, int expanded_from, int candidate,
                                 int target, const SolverConfig& config = {});

/// Best-first search with the equivalent-cost lower bound. Admissibility is
/// guaranteed but consistency is not, so closed vertices reopen whenever a
/// strictly cheaper route reaches them.
Path astar_equivcost(const WeightedGraph& graph, const SolverConfig& config = {},
                     const AStarConfig& astar = {}, SearchStats* stats = nullptr);

}  // namespace dhpf
