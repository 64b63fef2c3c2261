#include "apm/transform.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace apm {

namespace {

// Shared merge body; resolve(key) returns the merged vertex's label, or
// nullopt to drop the vertex.
template <typename Resolve>
LabeledGraph apm_once_impl(const LabeledGraph& g, Resolve&& resolve) {
    if (auto violation = validate(g)) {
        throw std::invalid_argument("apm_once: invalid input graph: " + *violation);
    }

    constexpr VertexId kDropped = static_cast<VertexId>(-1);
    const std::size_t m = g.edges.size();

    LabeledGraph out;
    out.layer = g.layer + 1;
    out.edge_labels.emplace();  // layer >= 1 always carries edge labels

    // One merged vertex per input edge, in input-edge order.
    std::vector<VertexId> merged_id(m, kDropped);
    for (std::size_t e = 0; e < m; ++e) {
        const auto [u, v] = g.edges[e];
        const AppKey key =
            g.has_edge_labels()
                ? canonical_app_key(g.vertex_labels[u], g.vertex_labels[v], (*g.edge_labels)[e])
                : canonical_app_key(g.vertex_labels[u], g.vertex_labels[v]);
        const std::optional<Label> label = resolve(key);
        if (!label) continue;
        merged_id[e] = out.num_vertices++;
        out.vertex_labels.push_back(*label);
    }

    // Incidence lists in edge order; any two edges meeting at v become
    // adjacent merged vertices, with v as their sharing point.
    std::vector<std::vector<std::uint32_t>> incident(g.num_vertices);
    for (std::size_t e = 0; e < m; ++e) {
        if (merged_id[e] == kDropped) continue;
        incident[g.edges[e].first].push_back(static_cast<std::uint32_t>(e));
        incident[g.edges[e].second].push_back(static_cast<std::uint32_t>(e));
    }
    for (VertexId v = 0; v < g.num_vertices; ++v) {
        const auto& inc = incident[v];
        for (std::size_t a = 0; a < inc.size(); ++a) {
            for (std::size_t b = a + 1; b < inc.size(); ++b) {
                const Edge& ea = g.edges[inc[a]];
                const Edge& eb = g.edges[inc[b]];
                // v is the unique sharing point; the other endpoints must
                // differ or the input contained a duplicate edge.
                const VertexId other_a = ea.first == v ? ea.second : ea.first;
                const VertexId other_b = eb.first == v ? eb.second : eb.first;
                assert(other_a != other_b);
                (void)other_a;
                (void)other_b;
                out.edges.emplace_back(merged_id[inc[a]], merged_id[inc[b]]);
                out.edge_labels->push_back(g.vertex_labels[v]);
            }
        }
    }
    return out;
}

}  // namespace

LabeledGraph apm_once(const LabeledGraph& g, LabelInterner& interner, OovPolicy policy) {
    if (interner.frozen()) return apm_once(g, std::as_const(interner), policy);
    return apm_once_impl(
        g, [&interner](const AppKey& key) { return std::optional<Label>(interner.intern(key)); });
}

LabeledGraph apm_once(const LabeledGraph& g, const LabelInterner& interner, OovPolicy policy) {
    if (!interner.frozen()) {
        throw std::logic_error("apm_once: read-only transform needs a frozen interner");
    }
    if (policy == OovPolicy::Skip) {
        return apm_once_impl(g, [&interner](const AppKey& key) { return interner.lookup(key); });
    }
    return apm_once_impl(g, [&interner](const AppKey& key) {
        const auto label = interner.lookup(key);
        if (!label) throw OutOfVocabulary("unseen pattern key in frozen interner");
        return label;
    });
}

LayerStack apm_multi_layer(const LabeledGraph& g, std::span<LabelInterner> interners,
                           OovPolicy policy) {
    LayerStack stack;
    stack.graphs.reserve(interners.size() + 1);
    stack.graphs.push_back(g);
    for (LabelInterner& interner : interners) {
        stack.graphs.push_back(apm_once(stack.graphs.back(), interner, policy));
    }
    return stack;
}

LayerStack apm_multi_layer(const LabeledGraph& g, std::span<const LabelInterner> interners,
                           OovPolicy policy) {
    LayerStack stack;
    stack.graphs.reserve(interners.size() + 1);
    stack.graphs.push_back(g);
    for (const LabelInterner& interner : interners) {
        stack.graphs.push_back(apm_once(stack.graphs.back(), interner, policy));
    }
    return stack;
}

std::uint64_t line_graph_edge_count(const LabeledGraph& g) {
    if (auto violation = validate(g)) {
        throw std::invalid_argument("line_graph_edge_count: invalid graph: " + *violation);
    }
    std::uint64_t total = 0;
    for (std::uint32_t d : g.degrees()) {
        total += static_cast<std::uint64_t>(d) * (d - 1) / 2;
    }
    return total;
}

}  // namespace apm
