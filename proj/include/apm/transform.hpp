#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apm/graph.hpp"
#include "apm/interner.hpp"

namespace apm {

// What to do when a frozen interner meets an unseen pattern: fail, or drop
// the merged vertex (and its incident merged edges).
enum class OovPolicy { Fail, Skip };

/*
 * graphs[0] is the input graph, graphs[i] the result of i merges. The
 * per-layer interners are owned by the caller and shared across every
 * graph of a dataset at the same layer.
 */
struct LayerStack {
    std::vector<LabeledGraph> graphs;

    const LabeledGraph& top() const { return graphs.back(); }
    std::size_t layers() const { return graphs.size() - 1; }
};

/*
 * One step of adjacent point merging: one merged vertex per input edge,
 * labeled by the interned pattern of its endpoints (and edge label, when
 * present); two merged vertices are adjacent iff their source edges share
 * an endpoint, and the connecting edge is labeled with the sharing point's
 * original vertex label. Merged vertices are emitted in input-edge order.
 */
LabeledGraph apm_once(const LabeledGraph& g, LabelInterner& interner,
                      OovPolicy policy = OovPolicy::Fail);

// Read-only transform against a frozen interner (the shareable phase of the
// two-phase contract). Unseen patterns fail or are skipped per the policy.
LabeledGraph apm_once(const LabeledGraph& g, const LabelInterner& interner,
                      OovPolicy policy = OovPolicy::Fail);

// Iterates apm_once; interners.size() determines the layer count.
// An empty span yields a stack holding only the input graph.
LayerStack apm_multi_layer(const LabeledGraph& g, std::span<LabelInterner> interners,
                           OovPolicy policy = OovPolicy::Fail);

LayerStack apm_multi_layer(const LabeledGraph& g, std::span<const LabelInterner> interners,
                           OovPolicy policy = OovPolicy::Fail);

// Exact edge count of apm_once(g): sum over vertices of C(deg, 2).
std::uint64_t line_graph_edge_count(const LabeledGraph& g);

}  // namespace apm
