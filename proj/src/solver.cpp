#include "dhpf/solver.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dhpf/rng.hpp"

namespace dhpf {

namespace {

// Vertices reachable from start, as a 0/1 mask indexed by vertex id.
std::vector<char> component_mask(const WeightedGraph& graph, int start) {
    std::vector<char> mask(static_cast<std::size_t>(graph.vertex_count()) + 1, 0);
    std::vector<int> queue{start};
    mask[static_cast<std::size_t>(start)] = 1;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (const auto& n : graph.neighbors(v)) {
            if (!mask[static_cast<std::size_t>(n.vertex)]) {
                mask[static_cast<std::size_t>(n.vertex)] = 1;
                queue.push_back(n.vertex);
            }
        }
    }
    return mask;
}

double interior_residual(const WeightedGraph& graph, const std::vector<double>& values,
                         int hi, int lo) {
    double worst = 0.0;
    for (int v = 1; v <= graph.vertex_count(); ++v) {
        if (v == hi || v == lo) continue;
        double net = 0.0;
        for (const auto& n : graph.neighbors(v))
            net += (values[static_cast<std::size_t>(v)] - values[static_cast<std::size_t>(n.vertex)]) / n.cost;
        worst = std::max(worst, std::abs(net));
    }
    return worst;
}

void solve_direct(const WeightedGraph& graph, const std::vector<char>& in_component,
                  int hi, int lo, std::vector<double>& values) {
    // Interior vertices of the boundary component, mapped to matrix rows.
    std::vector<int> row_of(static_cast<std::size_t>(graph.vertex_count()) + 1, -1);
    std::vector<int> vertex_of;
    for (int v = 1; v <= graph.vertex_count(); ++v) {
        if (v == hi || v == lo || !in_component[static_cast<std::size_t>(v)]) continue;
        row_of[static_cast<std::size_t>(v)] = static_cast<int>(vertex_of.size());
        vertex_of.push_back(v);
    }
    const int m = static_cast<int>(vertex_of.size());
    if (m == 0) return;

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int row = 0; row < m; ++row) {
        int v = vertex_of[static_cast<std::size_t>(row)];
        double diag = 0.0;
        for (const auto& n : graph.neighbors(v)) {
            double w = 1.0 / n.cost;
            diag += w;
            if (n.vertex == hi) {
                rhs(row) += w;  // boundary value 1
            } else if (n.vertex != lo) {
                triplets.emplace_back(row, row_of[static_cast<std::size_t>(n.vertex)], -w);
            }
        }
        triplets.emplace_back(row, row, diag);
    }

    Eigen::SparseMatrix<double> laplacian(m, m);
    laplacian.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(laplacian);
    if (solver.info() != Eigen::Success)
        throw SolveError("singular balance system", 0.0);
    Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw SolveError("balance system solve failed", 0.0);

    for (int row = 0; row < m; ++row)
        values[static_cast<std::size_t>(vertex_of[static_cast<std::size_t>(row)])] = x(row);
}

long solve_iterative(const WeightedGraph& graph, const std::vector<char>& in_component,
                     int hi, int lo, const SolverConfig& config, std::vector<double>& values,
                     double& residual_out) {
    // Gauss-Seidel: ascending vertex order, freshest values, V_i = sum b_ik V_k
    // with b_ik = (1/C_ik) / sum_m (1/C_im).
    for (long iter = 1; iter <= config.max_iterations; ++iter) {
        double max_change = 0.0;
        for (int v = 1; v <= graph.vertex_count(); ++v) {
            if (v == hi || v == lo || !in_component[static_cast<std::size_t>(v)]) continue;
            double weighted = 0.0;
            double weight_sum = 0.0;
            for (const auto& n : graph.neighbors(v)) {
                double w = 1.0 / n.cost;
                weighted += w * values[static_cast<std::size_t>(n.vertex)];
                weight_sum += w;
            }
            double next = weighted / weight_sum;
            max_change = std::max(max_change, std::abs(next - values[static_cast<std::size_t>(v)]));
            values[static_cast<std::size_t>(v)] = next;
        }
        if (max_change < config.tolerance) {
            double residual = interior_residual(graph, values, hi, lo);
            if (residual <= config.tolerance) {
                residual_out = residual;
                return iter;
            }
        }
    }
    residual_out = interior_residual(graph, values, hi, lo);
    throw SolveError("relaxation did not converge within " +
                         std::to_string(config.max_iterations) + " sweeps",
                     residual_out);
}

}  // namespace

PotentialField solve_boundary(const WeightedGraph& graph, int hi, int lo,
                              const SolverConfig& config) {
    if (!graph.valid_vertex(hi) || !graph.valid_vertex(lo) || hi == lo)
        throw std::invalid_argument("boundary vertices must be distinct valid vertex ids");
    if (!(config.tolerance > 0.0) || config.max_iterations < 1)
        throw std::invalid_argument("tolerance must be positive and max_iterations >= 1");

    auto in_component = component_mask(graph, hi);
    if (!in_component[static_cast<std::size_t>(lo)])
        throw DisconnectedError("infinite equivalent cost: vertices " + std::to_string(hi) +
                                " and " + std::to_string(lo) + " are disconnected");

    PotentialField field;
    field.values.assign(static_cast<std::size_t>(graph.vertex_count()) + 1, 0.5);
    field.values[static_cast<std::size_t>(hi)] = 1.0;
    field.values[static_cast<std::size_t>(lo)] = 0.0;
    if (config.init == InitScheme::seeded_random) {
        SplitMix64 rng(config.init_seed);
        for (int v = 1; v <= graph.vertex_count(); ++v)
            if (v != hi && v != lo && in_component[static_cast<std::size_t>(v)])
                field.values[static_cast<std::size_t>(v)] = rng.uniform01();
    }

    if (config.method == SolveMethod::direct_linear) {
        solve_direct(graph, in_component, hi, lo, field.values);
        field.iterations = 0;
        field.residual = interior_residual(graph, field.values, hi, lo);
    } else {
        field.iterations =
            solve_iterative(graph, in_component, hi, lo, config, field.values, field.residual);
    }
    return field;
}

PotentialField solve_potentials(const WeightedGraph& graph, const SolverConfig& config) {
    return solve_boundary(graph, graph.source(), graph.target(), config);
}

double FlowAssignment::flow(const WeightedGraph& graph, int i, int j) const {
    auto idx = graph.edge_index(i, j);
    if (!idx) throw std::invalid_argument("no edge " + std::to_string(i) + "-" + std::to_string(j));
    const auto& e = graph.edges()[static_cast<std::size_t>(*idx)];
    double f = edge_flow[static_cast<std::size_t>(*idx)];
    return e.u == i ? f : -f;
}

std::vector<std::pair<int, double>> FlowAssignment::positive_out(const WeightedGraph& graph,
                                                                 int v) const {
    std::vector<std::pair<int, double>> out;
    for (const auto& n : graph.neighbors(v)) {
        const auto& e = graph.edges()[static_cast<std::size_t>(n.edge)];
        double f = e.u == v ? edge_flow[static_cast<std::size_t>(n.edge)]
                            : -edge_flow[static_cast<std::size_t>(n.edge)];
        if (positive(f)) out.emplace_back(n.vertex, f);
    }
    return out;
}

std::vector<std::pair<int, double>> FlowAssignment::positive_in(const WeightedGraph& graph,
                                                                int v) const {
    std::vector<std::pair<int, double>> in;
    for (const auto& n : graph.neighbors(v)) {
        const auto& e = graph.edges()[static_cast<std::size_t>(n.edge)];
        double f = e.u == v ? edge_flow[static_cast<std::size_t>(n.edge)]
                            : -edge_flow[static_cast<std::size_t>(n.edge)];
        if (positive(-f)) in.emplace_back(n.vertex, -f);
    }
    return in;
}

FlowAssignment compute_flows(const WeightedGraph& graph, const PotentialField& field,
                             double positive_epsilon) {
    FlowAssignment flows;
    flows.positive_epsilon = positive_epsilon;
    flows.edge_flow.reserve(graph.edges().size());
    for (const auto& e : graph.edges())
        flows.edge_flow.push_back((field.at(e.u) - field.at(e.v)) / e.cost);
    return flows;
}

double kcl_residual(const WeightedGraph& graph, const PotentialField& field) {
    return interior_residual(graph, field.values, graph.source(), graph.target());
}

double equivalent_cost(const WeightedGraph& graph, int i, int j, const SolverConfig& config) {
    PotentialField field = solve_boundary(graph, i, j, config);
    double injected = 0.0;
    for (const auto& n : graph.neighbors(i))
        injected += (1.0 - field.at(n.vertex)) / n.cost;
    if (!(injected > 0.0))
        throw SolveError("no current injected at port vertex " + std::to_string(i),
                         field.residual);
    return 1.0 / injected;
}

}  // namespace dhpf
