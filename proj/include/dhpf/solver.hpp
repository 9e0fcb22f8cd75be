#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dhpf/graph.hpp"

namespace dhpf {

enum class SolveMethod {
    iterative_relaxation,  // Gauss-Seidel sweeps in ascending vertex order
    direct_linear,         // sparse factorization of the interior KCL system
};

enum class InitScheme {
    half,           // interior vertices start at 1/2
    seeded_random,  // interior vertices start uniform in (0, 1)
};

struct SolverConfig {
    double tolerance = 1e-9;  // threshold on max per-sweep change and KCL residual
    long max_iterations = 1'000'000;
    SolveMethod method = SolveMethod::iterative_relaxation;
    InitScheme init = InitScheme::half;
    std::uint64_t init_seed = 0;
    double flow_epsilon = 1e-12;  // flows with |I| <= this count as zero
};

/// Discrete harmonic potential over the graph: 1 at the source, 0 at the
/// target, and Kirchhoff current balance at every other vertex of the
/// source's component. Vertices outside that component sit at 1/2 and carry
/// no flow.
struct PotentialField {
    std::vector<double> values;  // indexed by vertex id; values[0] unused
    double residual = 0.0;       // max interior |sum of incident flows|
    long iterations = 0;         // relaxation sweeps; 0 for the direct solve

    double at(int v) const { return values[static_cast<std::size_t>(v)]; }
};

/// Solver failed to reach the requested tolerance (or hit a singular system).
class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& message, double residual)
        : std::runtime_error(message), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_ = 0.0;
};

/// The two queried vertices lie in different components, so the equivalent
/// cost between them is infinite.
class DisconnectedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

PotentialField solve_potentials(const WeightedGraph& graph, const SolverConfig& config = {});

/// Same balance problem with arbitrary boundary vertices: V[hi] = 1,
/// V[lo] = 0, ignoring the graph's designated source/target. Throws
/// DisconnectedError when hi and lo are in different components.
PotentialField solve_boundary(const WeightedGraph& graph, int hi, int lo,
                              const SolverConfig& config = {});

/// Signed edge flows I_ij = (V_i - V_j) / C_ij, stored once per edge in the
/// canonical (u, v) orientation; queried antisymmetrically.
struct FlowAssignment {
    std::vector<double> edge_flow;  // aligned with graph.edges(), sign u -> v
    double positive_epsilon = 1e-12;

    bool positive(double f) const { return f > positive_epsilon; }
    double flow(const WeightedGraph& graph, int i, int j) const;

    /// Neighbors receiving positive flow from v, ascending id.
    std::vector<std::pair<int, double>> positive_out(const WeightedGraph& graph, int v) const;
    /// Neighbors sending positive flow into v, ascending id.
    std::vector<std::pair<int, double>> positive_in(const WeightedGraph& graph, int v) const;
};

FlowAssignment compute_flows(const WeightedGraph& graph, const PotentialField& field,
                             double positive_epsilon = 1e-12);

/// Max over interior vertices of |sum of incident flows|.
double kcl_residual(const WeightedGraph& graph, const PotentialField& field);

/// Effective resistance of the i-j port: pin V[i] = 1, V[j] = 0, solve the
/// balance system, and return 1 / (current injected at i). Provably at most
/// the cost of any i-j path. Throws DisconnectedError for split ports.
double equivalent_cost(const WeightedGraph& graph, int i, int j,
                       const SolverConfig& config = {});

}  // namespace dhpf
