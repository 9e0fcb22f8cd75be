#include "dhpf/routing_sim.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "dhpf/rng.hpp"

namespace dhpf {

namespace {

// Live-subgraph reachability, for the permanent-failure abort check.
bool live_connected(const WeightedGraph& graph, const std::vector<char>& failed, int from,
                    int to) {
    if (failed[static_cast<std::size_t>(from)] || failed[static_cast<std::size_t>(to)])
        return false;
    std::vector<char> seen(static_cast<std::size_t>(graph.vertex_count()) + 1, 0);
    std::vector<int> queue{from};
    seen[static_cast<std::size_t>(from)] = 1;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (v == to) return true;
        for (const auto& n : graph.neighbors(v)) {
            if (seen[static_cast<std::size_t>(n.vertex)] ||
                failed[static_cast<std::size_t>(n.vertex)])
                continue;
            seen[static_cast<std::size_t>(n.vertex)] = 1;
            queue.push_back(n.vertex);
        }
    }
    return false;
}

}  // namespace

std::vector<int> SimulationTrace::route() const {
    std::vector<int> sequence;
    for (const auto& h : hops)
        if (sequence.empty() || sequence.back() != h.holder) sequence.push_back(h.holder);
    return sequence;
}

SimulationTrace run_decentralized(const WeightedGraph& graph, const SimConfig& config,
                                  const SimObserver& observer) {
    if (config.sweeps_per_hop < 1) throw std::invalid_argument("sweeps_per_hop must be >= 1");
    if (config.max_hops < 1) throw std::invalid_argument("max_hops must be >= 1");

    const int n = graph.vertex_count();
    const int target = graph.target();
    SplitMix64 rng(config.rng_seed);

    // Potentials start as seeded noise; the target is pinned at 0 and the
    // packet holder at 1 for as long as it holds the packet.
    std::vector<double> potential(static_cast<std::size_t>(n) + 1, 0.0);
    int holder = graph.source();
    for (int v = 1; v <= n; ++v) {
        if (v == target || v == holder) continue;
        potential[static_cast<std::size_t>(v)] = rng.uniform01();
    }
    potential[static_cast<std::size_t>(target)] = 0.0;
    potential[static_cast<std::size_t>(holder)] = 1.0;

    std::vector<char> failed(static_cast<std::size_t>(n) + 1, 0);

    SimulationTrace trace;
    trace.hops.push_back({0, holder, std::nullopt});
    if (observer) observer(0, potential);

    for (int hop = 1; hop <= config.max_hops; ++hop) {
        if (config.failure_duration == FailureDuration::transient_one_hop)
            failed.assign(failed.size(), 0);

        // Induce this hop's malfunction, never in the target or the holder.
        std::optional<int> failed_now;
        if (config.failure_mode == FailureMode::random_per_hop) {
            std::vector<int> eligible;
            for (int v = 1; v <= n; ++v)
                if (v != target && v != holder && !failed[static_cast<std::size_t>(v)])
                    eligible.push_back(v);
            if (!eligible.empty()) {
                int pick = eligible[rng.bounded(eligible.size())];
                failed[static_cast<std::size_t>(pick)] = 1;
                failed_now = pick;
            }
        }

        if (config.failure_duration == FailureDuration::permanent &&
            !live_connected(graph, failed, holder, target)) {
            trace.hops.push_back({hop, holder, failed_now});
            trace.total_hops = hop;
            trace.disconnected = true;
            break;
        }

        // Local relaxation: live routers average over live neighbors only; a
        // failed router's potential is frozen and its edges are masked.
        for (int sweep = 0; sweep < config.sweeps_per_hop; ++sweep) {
            for (int v = 1; v <= n; ++v) {
                if (v == holder || v == target || failed[static_cast<std::size_t>(v)]) continue;
                double weighted = 0.0;
                double weight_sum = 0.0;
                for (const auto& nb : graph.neighbors(v)) {
                    if (failed[static_cast<std::size_t>(nb.vertex)]) continue;
                    double w = 1.0 / nb.cost;
                    weighted += w * potential[static_cast<std::size_t>(nb.vertex)];
                    weight_sum += w;
                }
                if (weight_sum > 0.0) potential[static_cast<std::size_t>(v)] = weighted / weight_sum;
            }
        }

        // Forward along the strongest positive flow; hold still if none.
        int best = 0;
        double best_flow = 0.0;
        for (const auto& nb : graph.neighbors(holder)) {
            if (failed[static_cast<std::size_t>(nb.vertex)]) continue;
            double flow =
                (potential[static_cast<std::size_t>(holder)] -
                 potential[static_cast<std::size_t>(nb.vertex)]) /
                nb.cost;
            if (flow > 1e-12 && flow > best_flow) {
                best = nb.vertex;
                best_flow = flow;
            }
        }
        if (best != 0) {
            trace.path_cost += graph.edge_cost(holder, best);
            holder = best;
            potential[static_cast<std::size_t>(holder)] = 1.0;
        }

        trace.hops.push_back({hop, holder, failed_now});
        trace.total_hops = hop;
        if (observer) observer(hop, potential);
        if (holder == target) {
            trace.delivered = true;
            break;
        }
    }
    return trace;
}

TrialStats run_trials(const WeightedGraph& graph, const SimConfig& config, int trial_count) {
    if (trial_count < 1) throw std::invalid_argument("trial_count must be >= 1");

    TrialStats stats;
    int delivered_count = 0;
    for (int trial = 0; trial < trial_count; ++trial) {
        SimConfig trial_config = config;
        trial_config.rng_seed = config.rng_seed + static_cast<std::uint64_t>(trial);
        SimulationTrace trace = run_decentralized(graph, trial_config);
        stats.hop_counts.push_back(trace.total_hops);
        stats.delivered.push_back(trace.delivered);
        if (trace.delivered) {
            ++delivered_count;
            ++stats.histogram[trace.total_hops];
        }
    }
    stats.delivery_rate = static_cast<double>(delivered_count) / trial_count;
    return stats;
}

std::string serialize_trace(const SimulationTrace& trace) {
    std::ostringstream out;
    for (const auto& h : trace.hops) {
        out << h.hop << '\t' << h.holder << '\t';
        if (h.failed)
            out << *h.failed;
        else
            out << '-';
        out << '\n';
    }
    return out.str();
}

std::string serialize_histogram(const std::map<int, int>& histogram) {
    std::ostringstream out;
    for (const auto& [bin, count] : histogram) out << bin << '\t' << count << '\n';
    return out.str();
}

}  // namespace dhpf
