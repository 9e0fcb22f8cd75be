#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dhpf {

/// Raw description of a non-directed weighted graph. Vertex ids are 1-based;
/// every edge is an unordered pair with a strictly positive cost. This is the
/// mutable, possibly-invalid form; WeightedGraph is the validated one.
struct GraphData {
    struct Edge {
        int u = 0;
        int v = 0;
        double cost = 0.0;
    };

    int vertex_count = 0;
    std::vector<Edge> edges;
    int source = 0;
    int target = 0;
};

/// Syntax error in a graph file. line is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const noexcept { return violations.empty(); }
};

/// Structural violation found while constructing a WeightedGraph.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Checks every graph invariant: ids in range, positive finite costs, no
/// self-loops or duplicate edges, distinct valid source/target, and
/// source-target reachability. Returns all violations found.
ValidationReport validate(const GraphData& data);

/// True when a and b are in the same connected component of data.
bool connected(const GraphData& data, int a, int b);

/// Immutable validated graph with an adjacency index.
class WeightedGraph {
public:
    struct Neighbor {
        int vertex;
        double cost;
        int edge;  // index into edges()
    };

    /// Canonicalizes (u < v, edges sorted) and validates; throws
    /// ValidationError when the data breaks any invariant.
    explicit WeightedGraph(GraphData data);

    int vertex_count() const noexcept { return data_.vertex_count; }
    int source() const noexcept { return data_.source; }
    int target() const noexcept { return data_.target; }
    int edge_count() const noexcept { return static_cast<int>(data_.edges.size()); }
    const std::vector<GraphData::Edge>& edges() const noexcept { return data_.edges; }
    const GraphData& data() const noexcept { return data_; }

    /// Adjacency in ascending neighbor-id order. Throws std::out_of_range
    /// for an unknown vertex id.
    const std::vector<Neighbor>& neighbors(int v) const;

    std::optional<int> edge_index(int u, int v) const;
    double edge_cost(int u, int v) const;  // throws std::invalid_argument if absent
    bool valid_vertex(int v) const noexcept { return v >= 1 && v <= data_.vertex_count; }

private:
    GraphData data_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

/// Parses the line-oriented graph file format:
///   vertices N        (exactly once, first non-comment line)
///   edge i j cost     (i != j, 1-based ids, cost > 0)
///   source S / target T
/// '#' starts a comment. Throws ParseError with the offending line number.
GraphData parse_graph_data(const std::string& text);

/// parse_graph_data followed by validation; throws ParseError or ValidationError.
WeightedGraph parse_graph(const std::string& text);

/// Canonical text form; parse_graph(serialize_graph(g.data())) reproduces g.
std::string serialize_graph(const GraphData& data);

/// A vertex sequence with its total edge cost.
struct Path {
    std::vector<int> vertices;
    double cost = 0.0;
};

/// Sums edge costs along the sequence exactly as traversed; throws
/// std::invalid_argument when consecutive vertices are not adjacent.
double path_cost(const WeightedGraph& graph, const std::vector<int>& vertices);

}  // namespace dhpf
