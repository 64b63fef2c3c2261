#include "apm/graph.hpp"

#include <unordered_set>

namespace apm {

namespace {

struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept {
        return (static_cast<std::size_t>(e.first) << 32) ^ e.second;
    }
};

}  // namespace

std::vector<std::uint32_t> LabeledGraph::degrees() const {
    std::vector<std::uint32_t> deg(num_vertices, 0);
    for (const Edge& e : edges) {
        ++deg[e.first];
        ++deg[e.second];
    }
    return deg;
}

std::optional<std::string> validate(const LabeledGraph& g) {
    if (g.vertex_labels.size() != g.num_vertices) {
        return "vertex label count " + std::to_string(g.vertex_labels.size()) +
               " does not match num_vertices " + std::to_string(g.num_vertices);
    }
    std::unordered_set<Edge, EdgeHash> seen;
    seen.reserve(g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (e.first == e.second) {
            return "self-loop at edge " + std::to_string(i) + " (vertex " +
                   std::to_string(e.first) + ")";
        }
        if (e.first >= g.num_vertices || e.second >= g.num_vertices) {
            return "edge " + std::to_string(i) + " (" + std::to_string(e.first) + "," +
                   std::to_string(e.second) + ") references a vertex >= " +
                   std::to_string(g.num_vertices);
        }
        if (!seen.insert(make_edge(e.first, e.second)).second) {
            return "duplicate edge " + std::to_string(i) + " (" + std::to_string(e.first) +
                   "," + std::to_string(e.second) + ")";
        }
    }
    if (g.edge_labels && g.edge_labels->size() != g.edges.size()) {
        return "edge label count " + std::to_string(g.edge_labels->size()) +
               " does not match edge count " + std::to_string(g.edges.size());
    }
    if (g.layer >= 1 && !g.edge_labels.has_value()) {
        return "graph at layer " + std::to_string(g.layer) + " is missing edge labels";
    }
    return std::nullopt;
}

}  // namespace apm
