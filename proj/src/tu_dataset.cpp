#include "apm/tu_dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <unordered_map>

namespace apm {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const fs::path& file, std::size_t line, const std::string& what) {
    throw ParseError(file.string() + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

long parse_int(std::string_view token, const fs::path& file, std::size_t line) {
    token = trim(token);
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
        fail(file, line, "expected an integer, got \"" + std::string(token) + "\"");
    }
    return value;
}

// One integer per non-blank line; trailing blank lines tolerated.
std::vector<long> read_int_column(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    std::vector<long> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view t = trim(line);
        if (t.empty()) continue;
        values.push_back(parse_int(t, file, line_no));
    }
    return values;
}

// Comma-separated 1-based "i, j" pairs.
std::vector<std::pair<long, long>> read_adjacency(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    std::vector<std::pair<long, long>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view t = trim(line);
        if (t.empty()) continue;
        const std::size_t comma = t.find(',');
        if (comma == std::string_view::npos) {
            fail(file, line_no, "expected \"i, j\"");
        }
        pairs.emplace_back(parse_int(t.substr(0, comma), file, line_no),
                           parse_int(t.substr(comma + 1), file, line_no));
    }
    return pairs;
}

std::map<int, int> densify(std::vector<long>& values) {
    std::set<long> distinct(values.begin(), values.end());
    std::map<int, int> mapping;
    int next = 0;
    for (long v : distinct) mapping[static_cast<int>(v)] = next++;
    for (long& v : values) v = mapping[static_cast<int>(v)];
    return mapping;
}

struct PendingEdge {
    std::size_t graph;
    VertexId u, v;  // local 0-based, u < v
    std::optional<Label> label;
};

}  // namespace

TUDataset parse_tud(const fs::path& dir, const std::string& name) {
    const fs::path adjacency_file = dir / (name + "_A.txt");
    const fs::path indicator_file = dir / (name + "_graph_indicator.txt");
    const fs::path graph_labels_file = dir / (name + "_graph_labels.txt");
    const fs::path node_labels_file = dir / (name + "_node_labels.txt");
    const fs::path edge_labels_file = dir / (name + "_edge_labels.txt");

    for (const fs::path& required : {adjacency_file, indicator_file, graph_labels_file}) {
        if (!fs::exists(required)) {
            throw ParseError("missing required file " + required.string());
        }
    }

    TUDataset ds;
    ds.name = name;
    ds.has_node_labels = fs::exists(node_labels_file);
    ds.has_edge_labels = fs::exists(edge_labels_file);

    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string fname = entry.path().filename().string();
        if (fname.rfind(name + "_", 0) == 0 && fname.find("attributes") != std::string::npos) {
            ds.report.ignored_files.push_back(fname);
        }
    }
    std::sort(ds.report.ignored_files.begin(), ds.report.ignored_files.end());

    const std::vector<long> indicator = read_int_column(indicator_file);
    std::vector<long> graph_labels = read_int_column(graph_labels_file);
    const std::size_t num_graphs = graph_labels.size();
    const std::size_t num_nodes = indicator.size();

    // Global 1-based node id -> (graph, local 0-based id), in file order.
    std::vector<std::size_t> node_graph(num_nodes);
    std::vector<VertexId> node_local(num_nodes);
    std::vector<std::size_t> graph_size(num_graphs, 0);
    for (std::size_t i = 0; i < num_nodes; ++i) {
        const long gid = indicator[i];
        if (gid < 1 || static_cast<std::size_t>(gid) > num_graphs) {
            fail(indicator_file, i + 1,
                 "graph id " + std::to_string(gid) + " outside 1.." + std::to_string(num_graphs));
        }
        node_graph[i] = static_cast<std::size_t>(gid) - 1;
        node_local[i] = static_cast<VertexId>(graph_size[node_graph[i]]++);
    }

    std::vector<long> node_labels(num_nodes, 0);
    if (ds.has_node_labels) {
        node_labels = read_int_column(node_labels_file);
        if (node_labels.size() != num_nodes) {
            throw ParseError(node_labels_file.string() + ": " +
                             std::to_string(node_labels.size()) + " labels for " +
                             std::to_string(num_nodes) + " nodes");
        }
        ds.node_label_map = densify(node_labels);
    } else {
        ds.node_label_map = {{0, 0}};
    }

    const auto adjacency = read_adjacency(adjacency_file);
    ds.report.adjacency_lines = adjacency.size();

    std::vector<long> edge_labels;
    if (ds.has_edge_labels) {
        edge_labels = read_int_column(edge_labels_file);
        if (edge_labels.size() != adjacency.size()) {
            throw ParseError(edge_labels_file.string() + ": " +
                             std::to_string(edge_labels.size()) + " labels for " +
                             std::to_string(adjacency.size()) + " adjacency lines");
        }
        ds.edge_label_map = densify(edge_labels);
    }

    // Deduplicate the two directions of each undirected edge; an edge listed
    // once only is accepted as well.
    std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> first_seen;
    first_seen.reserve(adjacency.size());
    std::vector<PendingEdge> pending;
    pending.reserve(adjacency.size() / 2);
    for (std::size_t l = 0; l < adjacency.size(); ++l) {
        const auto [raw_i, raw_j] = adjacency[l];
        if (raw_i < 1 || static_cast<std::size_t>(raw_i) > num_nodes || raw_j < 1 ||
            static_cast<std::size_t>(raw_j) > num_nodes) {
            fail(adjacency_file, l + 1, "node id outside 1.." + std::to_string(num_nodes));
        }
        const std::size_t a = static_cast<std::size_t>(raw_i) - 1;
        const std::size_t b = static_cast<std::size_t>(raw_j) - 1;
        if (node_graph[a] != node_graph[b]) {
            fail(adjacency_file, l + 1,
                 "edge crosses graphs " + std::to_string(node_graph[a] + 1) + " and " +
                     std::to_string(node_graph[b] + 1));
        }
        if (a == b) {
            ++ds.report.dropped_self_loops;
            continue;
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                                  static_cast<std::uint64_t>(std::max(a, b));
        auto it = first_seen.find(key);
        if (it == first_seen.end()) {
            first_seen.emplace(key, std::make_pair(l, pending.size()));
            PendingEdge e;
            e.graph = node_graph[a];
            e.u = std::min(node_local[a], node_local[b]);
            e.v = std::max(node_local[a], node_local[b]);
            if (ds.has_edge_labels) e.label = static_cast<Label>(edge_labels[l]);
            pending.push_back(e);
        } else {
            ++ds.report.deduplicated_edges;
            if (ds.has_edge_labels) {
                const auto& kept = pending[it->second.second];
                if (kept.label != static_cast<Label>(edge_labels[l])) {
                    fail(adjacency_file, l + 1,
                         "edge labels disagree between the two directions (lines " +
                             std::to_string(it->second.first + 1) + " and " +
                             std::to_string(l + 1) + ")");
                }
            }
        }
    }
    ds.report.asymmetric_edges =
        pending.size() > ds.report.deduplicated_edges
            ? pending.size() - ds.report.deduplicated_edges
            : 0;

    ds.class_label_map = densify(graph_labels);

    ds.graphs.assign(num_graphs, LabeledGraph{});
    for (std::size_t g = 0; g < num_graphs; ++g) {
        ds.graphs[g].num_vertices = static_cast<VertexId>(graph_size[g]);
        ds.graphs[g].layer = 0;
        if (ds.has_edge_labels) ds.graphs[g].edge_labels.emplace();
    }
    for (std::size_t i = 0; i < num_nodes; ++i) {
        ds.graphs[node_graph[i]].vertex_labels.push_back(static_cast<Label>(node_labels[i]));
    }
    for (const PendingEdge& e : pending) {
        ds.graphs[e.graph].edges.emplace_back(e.u, e.v);
        if (e.label) ds.graphs[e.graph].edge_labels->push_back(*e.label);
    }

    ds.class_labels.reserve(num_graphs);
    for (long v : graph_labels) ds.class_labels.push_back(static_cast<int>(v));
    // graph_labels was densified in place; recover the raw values from the map
    std::map<int, int> inverse_class;
    for (const auto& [raw, dense] : ds.class_label_map) inverse_class[dense] = raw;
    for (int dense : ds.class_labels) ds.original_class_values.push_back(inverse_class[dense]);

    for (std::size_t g = 0; g < num_graphs; ++g) {
        if (auto violation = validate(ds.graphs[g])) {
            throw ParseError(name + " graph " + std::to_string(g + 1) + ": " + *violation);
        }
    }
    return ds;
}

void write_tud(const TUDataset& ds, const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream adjacency(dir / (ds.name + "_A.txt"));
    std::ofstream indicator(dir / (ds.name + "_graph_indicator.txt"));
    std::ofstream graph_labels(dir / (ds.name + "_graph_labels.txt"));
    std::ofstream node_labels;
    std::ofstream edge_labels;
    if (ds.has_node_labels) node_labels.open(dir / (ds.name + "_node_labels.txt"));
    if (ds.has_edge_labels) edge_labels.open(dir / (ds.name + "_edge_labels.txt"));

    std::size_t base = 0;  // global 1-based id of the current graph's vertex 0
    for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
        const LabeledGraph& graph = ds.graphs[g];
        graph_labels << ds.original_class_values[g] << "\n";
        for (VertexId v = 0; v < graph.num_vertices; ++v) {
            indicator << g + 1 << "\n";
            if (ds.has_node_labels) node_labels << graph.vertex_labels[v] << "\n";
        }
        for (std::size_t e = 0; e < graph.edges.size(); ++e) {
            const auto [u, v] = graph.edges[e];
            const std::size_t gu = base + u + 1;
            const std::size_t gv = base + v + 1;
            adjacency << gu << ", " << gv << "\n";
            adjacency << gv << ", " << gu << "\n";
            if (ds.has_edge_labels) {
                edge_labels << (*graph.edge_labels)[e] << "\n";
                edge_labels << (*graph.edge_labels)[e] << "\n";
            }
        }
        base += graph.num_vertices;
    }
}

DatasetSummary dataset_summary(const TUDataset& ds) {
    DatasetSummary s;
    s.name = ds.name;
    s.graph_count = ds.graphs.size();
    s.has_node_labels = ds.has_node_labels;
    s.has_edge_labels = ds.has_edge_labels;
    s.node_label_alphabet = ds.node_label_map.size();
    s.edge_label_alphabet = ds.edge_label_map.size();
    for (int c : ds.class_labels) ++s.class_histogram[c];

    if (!ds.graphs.empty()) {
        s.min_vertices = s.max_vertices = ds.graphs.front().num_vertices;
        s.min_edges = s.max_edges = ds.graphs.front().num_edges();
        double vsum = 0, esum = 0;
        for (const LabeledGraph& g : ds.graphs) {
            s.min_vertices = std::min<std::size_t>(s.min_vertices, g.num_vertices);
            s.max_vertices = std::max<std::size_t>(s.max_vertices, g.num_vertices);
            s.min_edges = std::min(s.min_edges, g.num_edges());
            s.max_edges = std::max(s.max_edges, g.num_edges());
            vsum += g.num_vertices;
            esum += static_cast<double>(g.num_edges());
        }
        s.mean_vertices = vsum / static_cast<double>(ds.graphs.size());
        s.mean_edges = esum / static_cast<double>(ds.graphs.size());
    }
    return s;
}

}  // namespace apm
