#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "dhpf/astar.hpp"
#include "dhpf/flow_tree.hpp"
#include "dhpf/graph.hpp"
#include "dhpf/mstar.hpp"
#include "dhpf/routing_sim.hpp"
#include "dhpf/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitDisconnected = 3;

std::string fmt6(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

std::string format_path(const dhpf::Path& path) {
    std::ostringstream out;
    out << "path:";
    for (std::size_t i = 0; i < path.vertices.size(); ++i)
        out << (i == 0 ? " " : " -> ") << path.vertices[i];
    out << "\ncost: " << fmt6(path.cost) << "\n";
    return out.str();
}

struct CommonOptions {
    std::string graph_file;
    dhpf::SolverConfig solver;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("graph", opts.graph_file, "graph file")->required();
    cmd->add_option("--method", opts.solver.method, "potential solver")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, dhpf::SolveMethod>{
                {"iterative", dhpf::SolveMethod::iterative_relaxation},
                {"direct", dhpf::SolveMethod::direct_linear}},
            CLI::ignore_case));
    cmd->add_option("--tolerance", opts.solver.tolerance, "convergence tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iterations", opts.solver.max_iterations, "relaxation sweep cap")
        ->check(CLI::PositiveNumber);
}

dhpf::WeightedGraph load_graph(const CommonOptions& opts) {
    return dhpf::parse_graph(read_file(opts.graph_file));
}

int cmd_solve(const CommonOptions& opts, bool print_hft) {
    dhpf::WeightedGraph graph = load_graph(opts);
    dhpf::PotentialField field = dhpf::solve_potentials(graph, opts.solver);
    dhpf::FlowAssignment flows = dhpf::compute_flows(graph, field, opts.solver.flow_epsilon);

    std::ostringstream out;
    for (int v = 1; v <= graph.vertex_count(); ++v)
        out << v << " " << fmt6(field.at(v)) << "\n";
    for (std::size_t idx = 0; idx < graph.edges().size(); ++idx) {
        const auto& e = graph.edges()[idx];
        double f = flows.edge_flow[idx];
        // Oriented from higher to lower potential.
        if (f >= 0.0)
            out << e.u << " " << e.v << " " << fmt6(f) << "\n";
        else
            out << e.v << " " << e.u << " " << fmt6(-f) << "\n";
    }
    char residual_line[64];
    std::snprintf(residual_line, sizeof residual_line, "residual %.6e\n", field.residual);
    out << residual_line;
    out << "iterations " << field.iterations << "\n";
    if (print_hft) out << dhpf::serialize_hft(dhpf::build_hft(graph, flows));
    std::cout << out.str();
    return kExitOk;
}

int cmd_path(const CommonOptions& opts, const std::string& algorithm, bool strict) {
    dhpf::WeightedGraph graph = load_graph(opts);
    dhpf::Path path;
    if (algorithm == "mstar-direct") {
        path = dhpf::mstar_direct(graph, opts.solver);
    } else if (algorithm == "mstar-indirect") {
        dhpf::MstarOptions options;
        options.strict = strict;
        path = dhpf::mstar_indirect(graph, opts.solver, options);
    } else if (algorithm == "astar") {
        path = dhpf::astar_equivcost(graph, opts.solver);
    } else {  // trace
        dhpf::PotentialField field = dhpf::solve_potentials(graph, opts.solver);
        dhpf::FlowAssignment flows = dhpf::compute_flows(graph, field, opts.solver.flow_epsilon);
        path = dhpf::trace_positive_path(graph, flows, graph.source());
    }
    std::cout << format_path(path);
    return kExitOk;
}

int cmd_equivcost(const CommonOptions& opts, int i, int j) {
    dhpf::WeightedGraph graph = load_graph(opts);
    if (!graph.valid_vertex(i) || !graph.valid_vertex(j) || i == j) {
        std::cerr << "error: vertex pair must be two distinct valid vertex ids\n";
        return kExitInputError;
    }
    std::cout << fmt6(dhpf::equivalent_cost(graph, i, j, opts.solver)) << "\n";
    return kExitOk;
}

int cmd_simulate(const CommonOptions& opts, const dhpf::SimConfig& sim, int trials,
                 const std::string& output_dir) {
    dhpf::WeightedGraph graph = load_graph(opts);
    dhpf::TrialStats stats = dhpf::run_trials(graph, sim, trials);

    if (!output_dir.empty()) {
        std::filesystem::path dir(output_dir);
        std::filesystem::create_directories(dir);
        for (int trial = 0; trial < trials; ++trial) {
            dhpf::SimConfig trial_config = sim;
            trial_config.rng_seed = sim.rng_seed + static_cast<std::uint64_t>(trial);
            dhpf::SimulationTrace trace = dhpf::run_decentralized(graph, trial_config);
            char name[32];
            std::snprintf(name, sizeof name, "trial_%04d.tsv", trial);
            write_file(dir / name, dhpf::serialize_trace(trace));
        }
        write_file(dir / "histogram.tsv", dhpf::serialize_histogram(stats.histogram));
    }

    int delivered = 0;
    for (bool d : stats.delivered) delivered += d ? 1 : 0;
    std::cout << "delivered " << delivered << "/" << trials << "\n";
    std::cout << "delivery_rate " << fmt6(stats.delivery_rate) << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& graph_file) {
    dhpf::GraphData data = dhpf::parse_graph_data(read_file(graph_file));
    dhpf::ValidationReport report = dhpf::validate(data);
    if (report.valid()) {
        std::cout << "valid\n";
        return kExitOk;
    }
    for (const auto& violation : report.violations) std::cout << violation << "\n";
    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planning and routing on weighted graphs via balanced potential flows"};
    app.require_subcommand(1);

    CommonOptions solve_opts;
    bool print_hft = false;
    CLI::App* solve = app.add_subcommand("solve", "print potentials, flows, and residual");
    add_common(solve, solve_opts);
    solve->add_flag("--hft", print_hft, "also print the positive-flow tree");

    CommonOptions path_opts;
    std::string algorithm;
    bool strict = false;
    CLI::App* path = app.add_subcommand("path", "find a start-target path");
    add_common(path, path_opts);
    path->add_option("--algorithm", algorithm, "path algorithm")
        ->required()
        ->check(CLI::IsMember({"mstar-direct", "mstar-indirect", "astar", "trace"}));
    path->add_flag("--strict", strict, "re-solve the field after each relaxation (mstar-indirect)");

    CommonOptions eq_opts;
    int port_i = 0;
    int port_j = 0;
    CLI::App* equivcost = app.add_subcommand("equivcost", "equivalent cost between two vertices");
    add_common(equivcost, eq_opts);
    equivcost->add_option("i", port_i, "first port vertex")->required();
    equivcost->add_option("j", port_j, "second port vertex")->required();

    CommonOptions sim_opts;
    dhpf::SimConfig sim;
    int trials = 1;
    std::string output_dir;
    CLI::App* simulate = app.add_subcommand("simulate", "decentralized routing simulation");
    simulate->add_option("graph", sim_opts.graph_file, "graph file")->required();
    simulate->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
    simulate->add_option("--failure", sim.failure_mode, "failure mode")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, dhpf::FailureMode>{
                {"none", dhpf::FailureMode::none},
                {"random", dhpf::FailureMode::random_per_hop}},
            CLI::ignore_case));
    simulate->add_option("--duration", sim.failure_duration, "failure duration")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, dhpf::FailureDuration>{
                {"transient", dhpf::FailureDuration::transient_one_hop},
                {"permanent", dhpf::FailureDuration::permanent}},
            CLI::ignore_case));
    simulate->add_option("--sweeps", sim.sweeps_per_hop, "update sweeps per hop")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--max-hops", sim.max_hops, "abort threshold")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.rng_seed, "base RNG seed");
    simulate->add_option("--output", output_dir, "directory for trace and histogram files");

    std::string validate_file;
    CLI::App* validate = app.add_subcommand("validate", "check a graph file");
    validate->add_option("graph", validate_file, "graph file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_opts, print_hft);
        if (path->parsed()) return cmd_path(path_opts, algorithm, strict);
        if (equivcost->parsed()) return cmd_equivcost(eq_opts, port_i, port_j);
        if (simulate->parsed()) return cmd_simulate(sim_opts, sim, trials, output_dir);
        if (validate->parsed()) return cmd_validate(validate_file);
    } catch (const dhpf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const dhpf::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const dhpf::DisconnectedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDisconnected;
    } catch (const dhpf::SolveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
