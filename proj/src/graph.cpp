#include "dhpf/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

namespace dhpf {

namespace {

std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

std::vector<std::vector<int>> plain_adjacency(const GraphData& data) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(data.vertex_count) + 1);
    for (const auto& e : data.edges) {
        if (e.u >= 1 && e.u <= data.vertex_count && e.v >= 1 && e.v <= data.vertex_count) {
            adj[static_cast<std::size_t>(e.u)].push_back(e.v);
            adj[static_cast<std::size_t>(e.v)].push_back(e.u);
        }
    }
    return adj;
}

std::string fmt_cost(double cost) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", cost);
    return buf;
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(report.violations.empty() ? std::string("invalid graph")
                                                   : "invalid graph: " + report.violations.front()),
      report_(std::move(report)) {}

bool connected(const GraphData& data, int a, int b) {
    if (a < 1 || a > data.vertex_count || b < 1 || b > data.vertex_count) return false;
    if (a == b) return true;
    auto adj = plain_adjacency(data);
    std::vector<char> seen(static_cast<std::size_t>(data.vertex_count) + 1, 0);
    std::vector<int> queue{a};
    seen[static_cast<std::size_t>(a)] = 1;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (seen[static_cast<std::size_t>(w)]) continue;
            if (w == b) return true;
            seen[static_cast<std::size_t>(w)] = 1;
            queue.push_back(w);
        }
    }
    return false;
}

ValidationReport validate(const GraphData& data) {
    ValidationReport report;
    auto add = [&report](const std::string& v) { report.violations.push_back(v); };

    if (data.vertex_count < 1) add("vertex count must be positive");

    auto in_range = [&](int v) { return v >= 1 && v <= data.vertex_count; };

    std::unordered_set<std::uint64_t> seen_pairs;
    for (std::size_t i = 0; i < data.edges.size(); ++i) {
        const auto& e = data.edges[i];
        std::string where = "edge " + std::to_string(e.u) + "-" + std::to_string(e.v);
        if (!in_range(e.u) || !in_range(e.v)) add(where + ": unknown vertex id");
        if (e.u == e.v) add(where + ": self-loop");
        if (!(e.cost > 0.0) || !std::isfinite(e.cost)) add(where + ": nonpositive cost");
        if (e.u != e.v && !seen_pairs.insert(pair_key(e.u, e.v)).second)
            add(where + ": duplicate edge");
    }

    if (!in_range(data.source)) add("source is not a valid vertex id");
    if (!in_range(data.target)) add("target is not a valid vertex id");
    if (data.source == data.target) add("source and target must differ");

    if (report.valid() && !connected(data, data.source, data.target))
        add("source and target are disconnected");

    return report;
}

WeightedGraph::WeightedGraph(GraphData data) : data_(std::move(data)) {
    ValidationReport report = validate(data_);
    if (!report.valid()) throw ValidationError(std::move(report));

    for (auto& e : data_.edges)
        if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(data_.edges.begin(), data_.edges.end(),
              [](const GraphData::Edge& a, const GraphData::Edge& b) {
                  return a.u != b.u ? a.u < b.u : a.v < b.v;
              });

    adjacency_.assign(static_cast<std::size_t>(data_.vertex_count) + 1, {});
    for (int idx = 0; idx < static_cast<int>(data_.edges.size()); ++idx) {
        const auto& e = data_.edges[static_cast<std::size_t>(idx)];
        adjacency_[static_cast<std::size_t>(e.u)].push_back({e.v, e.cost, idx});
        adjacency_[static_cast<std::size_t>(e.v)].push_back({e.u, e.cost, idx});
    }
    for (auto& list : adjacency_)
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
}

const std::vector<WeightedGraph::Neighbor>& WeightedGraph::neighbors(int v) const {
    if (!valid_vertex(v)) throw std::out_of_range("unknown vertex id " + std::to_string(v));
    return adjacency_[static_cast<std::size_t>(v)];
}

std::optional<int> WeightedGraph::edge_index(int u, int v) const {
    if (!valid_vertex(u) || !valid_vertex(v)) return std::nullopt;
    const auto& list = adjacency_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Neighbor& n, int id) { return n.vertex < id; });
    if (it == list.end() || it->vertex != v) return std::nullopt;
    return it->edge;
}

double WeightedGraph::edge_cost(int u, int v) const {
    auto idx = edge_index(u, v);
    if (!idx)
        throw std::invalid_argument("no edge " + std::to_string(u) + "-" + std::to_string(v));
    return data_.edges[static_cast<std::size_t>(*idx)].cost;
}

GraphData parse_graph_data(const std::string& text) {
    GraphData data;
    bool saw_vertices = false;
    bool saw_source = false;
    bool saw_target = false;
    std::unordered_set<std::uint64_t> seen_pairs;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);

        std::istringstream line(raw);
        std::string directive;
        if (!(line >> directive)) continue;  // blank or comment-only line

        auto expect_end = [&]() {
            std::string extra;
            if (line >> extra) throw ParseError(line_no, "malformed line: trailing tokens");
        };
        auto parse_int = [&](const char* what) {
            std::string tok;
            if (!(line >> tok)) throw ParseError(line_no, std::string("malformed line: missing ") + what);
            int value = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || ptr != tok.data() + tok.size())
                throw ParseError(line_no, std::string("malformed line: bad ") + what + " '" + tok + "'");
            return value;
        };
        auto parse_cost = [&]() {
            std::string tok;
            if (!(line >> tok)) throw ParseError(line_no, "malformed line: missing cost");
            char* end = nullptr;
            double value = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size() || !std::isfinite(value))
                throw ParseError(line_no, "malformed line: bad cost '" + tok + "'");
            return value;
        };

        if (!saw_vertices && directive != "vertices")
            throw ParseError(line_no, "expected 'vertices N' as the first directive");

        if (directive == "vertices") {
            if (saw_vertices) throw ParseError(line_no, "duplicate 'vertices' directive");
            data.vertex_count = parse_int("vertex count");
            expect_end();
            if (data.vertex_count < 1) throw ParseError(line_no, "vertex count must be positive");
            saw_vertices = true;
        } else if (directive == "edge") {
            int u = parse_int("vertex id");
            int v = parse_int("vertex id");
            double cost = parse_cost();
            expect_end();
            if (u < 1 || u > data.vertex_count || v < 1 || v > data.vertex_count)
                throw ParseError(line_no, "unknown vertex id");
            if (u == v) throw ParseError(line_no, "self-loop");
            if (!(cost > 0.0)) throw ParseError(line_no, "nonpositive cost");
            if (!seen_pairs.insert(pair_key(u, v)).second)
                throw ParseError(line_no, "duplicate edge");
            data.edges.push_back({u, v, cost});
        } else if (directive == "source") {
            if (saw_source) throw ParseError(line_no, "duplicate 'source' directive");
            data.source = parse_int("vertex id");
            expect_end();
            if (data.source < 1 || data.source > data.vertex_count)
                throw ParseError(line_no, "unknown vertex id");
            saw_source = true;
        } else if (directive == "target") {
            if (saw_target) throw ParseError(line_no, "duplicate 'target' directive");
            data.target = parse_int("vertex id");
            expect_end();
            if (data.target < 1 || data.target > data.vertex_count)
                throw ParseError(line_no, "unknown vertex id");
            saw_target = true;
        } else {
            throw ParseError(line_no, "unknown directive '" + directive + "'");
        }
    }

    if (!saw_vertices) throw ParseError(line_no, "missing 'vertices' directive");
    if (!saw_source || !saw_target) throw ParseError(line_no, "missing source/target");
    return data;
}

WeightedGraph parse_graph(const std::string& text) {
    return WeightedGraph(parse_graph_data(text));
}

std::string serialize_graph(const GraphData& data) {
    std::ostringstream out;
    out << "vertices " << data.vertex_count << "\n";
    auto edges = data.edges;
    for (auto& e : edges)
        if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(edges.begin(), edges.end(), [](const GraphData::Edge& a, const GraphData::Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (const auto& e : edges)
        out << "edge " << e.u << " " << e.v << " " << fmt_cost(e.cost) << "\n";
    out << "source " << data.source << "\n";
    out << "target " << data.target << "\n";
    return out.str();
}

double path_cost(const WeightedGraph& graph, const std::vector<int>& vertices) {
    double cost = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        cost += graph.edge_cost(vertices[i - 1], vertices[i]);
    return cost;
}

}  // namespace dhpf
