#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace apm {

using VertexId = std::uint32_t;
using Label = std::int32_t;

// Unordered vertex pair, stored with first <= second.
using Edge = std::pair<VertexId, VertexId>;

inline Edge make_edge(VertexId a, VertexId b) {
    return a < b ? Edge{a, b} : Edge{b, a};
}

/*
 * Undirected simple graph with integer vertex labels and optional integer
 * edge labels. layer 0 is an original (parsed) graph; layer i is the result
 * of i adjacent-point merges. Graphs at layer >= 1 always carry edge labels.
 */
struct LabeledGraph {
    VertexId num_vertices = 0;
    std::vector<Label> vertex_labels;               // one per vertex
    std::vector<Edge> edges;                        // no self-loops, no duplicates
    std::optional<std::vector<Label>> edge_labels;  // aligned with edges when present
    std::uint32_t layer = 0;

    std::size_t num_edges() const { return edges.size(); }
    bool has_edge_labels() const { return edge_labels.has_value(); }

    std::vector<std::uint32_t> degrees() const;

    friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
};

// Checks every LabeledGraph invariant; returns the first violation
// (with offending indices in the message) or nullopt when the graph is valid.
std::optional<std::string> validate(const LabeledGraph& g);

}  // namespace apm
