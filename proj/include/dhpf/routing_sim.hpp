#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dhpf/graph.hpp"

namespace dhpf {

enum class FailureMode { none, random_per_hop };
enum class FailureDuration { transient_one_hop, permanent };

struct SimConfig {
    int sweeps_per_hop = 50;  // local update sweeps between forwarding attempts
    FailureMode failure_mode = FailureMode::none;
    FailureDuration failure_duration = FailureDuration::transient_one_hop;
    std::uint64_t rng_seed = 0;
    int max_hops = 1000;
};

/// Hop-by-hop record of one decentralized run. The packet may linger or
/// revisit vertices while the field is still settling, so the traversed
/// route is not necessarily a simple path.
struct SimulationTrace {
    struct Hop {
        int hop = 0;
        int holder = 0;
        std::optional<int> failed;  // router malfunctioning during this hop
    };

    std::vector<Hop> hops;  // hops.front() is the initial state (hop 0)
    bool delivered = false;
    bool disconnected = false;  // permanent failures severed every route to the target
    int total_hops = 0;
    double path_cost = 0.0;  // sum of traversed edge costs

    /// Holder sequence with in-place stalls collapsed.
    std::vector<int> route() const;
};

/// Observer invoked after every hop with the current potential values
/// (indexed by vertex id).
using SimObserver = std::function<void(int hop, const std::vector<double>& potentials)>;

/// Routing on the fly: potentials start from seeded uniform (0,1) noise, the
/// target stays pinned at 0 and the packet holder at 1. Each hop optionally
/// fails one random router, lets every live router relax its potential from
/// live neighbors, then forwards the packet along the strongest positive
/// flow. Non-delivery within max_hops is an outcome, not an error.
SimulationTrace run_decentralized(const WeightedGraph& graph, const SimConfig& config,
                                  const SimObserver& observer = {});

struct TrialStats {
    std::vector<int> hop_counts;      // per trial
    std::vector<bool> delivered;      // per trial
    std::map<int, int> histogram;     // delivered hop count -> number of trials
    double delivery_rate = 0.0;
};

/// Runs trial_count simulations with per-trial seeds rng_seed + index.
TrialStats run_trials(const WeightedGraph& graph, const SimConfig& config, int trial_count);

/// One line per hop: "hop<TAB>holder<TAB>failed" with '-' for no failure.
std::string serialize_trace(const SimulationTrace& trace);

/// "bin<TAB>count" per occupied unit-width bin, ascending.
std::string serialize_histogram(const std::map<int, int>& histogram);

}  // namespace dhpf
