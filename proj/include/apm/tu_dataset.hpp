#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "apm/graph.hpp"

namespace apm {

struct ParseReport {
    std::size_t adjacency_lines = 0;
    std::size_t dropped_self_loops = 0;
    std::size_t deduplicated_edges = 0;  // (i,j)/(j,i) pairs merged
    std::size_t asymmetric_edges = 0;    // edges listed in one direction only
    std::vector<std::string> ignored_files;
};

/*
 * A TU-format dataset: layer-0 graphs plus per-graph class labels densified
 * to 0..C-1. Raw node-label and class values are remembered through the
 * densification maps; continuous attribute files are ignored at parse time.
 */
struct TUDataset {
    std::string name;
    std::vector<LabeledGraph> graphs;
    std::vector<int> class_labels;           // densified, aligned with graphs
    std::vector<int> original_class_values;  // raw values before remapping
    bool has_node_labels = false;
    bool has_edge_labels = false;
    std::map<int, int> node_label_map;   // raw -> dense
    std::map<int, int> edge_label_map;   // raw -> dense
    std::map<int, int> class_label_map;  // raw -> dense
    ParseReport report;

    std::size_t num_classes() const { return class_label_map.size(); }
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/*
 * Parses <dir>/<name>_A.txt, <name>_graph_indicator.txt,
 * <name>_graph_labels.txt and, when present, <name>_node_labels.txt /
 * <name>_edge_labels.txt. Adjacency lines are 1-based "i, j" pairs; the two
 * directions of an undirected edge deduplicate to one edge, with an error
 * on contradictory edge labels. Self-loops are dropped (and counted).
 * Missing node labels default every vertex to label 0. Attribute files are
 * recorded as ignored. Throws ParseError with file and line on bad input.
 */
TUDataset parse_tud(const std::filesystem::path& dir, const std::string& name);

// Writes the dataset back out in the same flat-file layout (labels are the
// densified ones). Inverse of parse_tud for datasets with dense labels.
void write_tud(const TUDataset& ds, const std::filesystem::path& dir);

struct DatasetSummary {
    std::string name;
    std::size_t graph_count = 0;
    std::map<int, std::size_t> class_histogram;  // dense class -> count
    std::size_t node_label_alphabet = 0;
    std::size_t edge_label_alphabet = 0;
    bool has_node_labels = false;
    bool has_edge_labels = false;
    std::size_t min_vertices = 0, max_vertices = 0;
    std::size_t min_edges = 0, max_edges = 0;
    double mean_vertices = 0.0, mean_edges = 0.0;
};

DatasetSummary dataset_summary(const TUDataset& ds);

}  // namespace apm
