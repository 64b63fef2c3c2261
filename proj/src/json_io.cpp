#include "apm/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace apm {

namespace {

using nlohmann::json;

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json timings_json(const PhaseTimings& t) {
    return json{{"pipeline_seconds", t.pipeline_seconds},
                {"model_selection_seconds", t.model_selection_seconds},
                {"evaluation_seconds", t.evaluation_seconds},
                {"total_seconds", t.total_seconds}};
}

json config_json(const CvConfig& config) {
    return json{{"outer_folds", config.outer_folds},
                {"repeats", config.repeats},
                {"inner_folds", config.inner_folds},
                {"c_grid", config.c_grid},
                {"layers", config.layers},
                {"dim", config.dim},
                {"seed", config.seed},
                {"selection", selection_mode_name(config.selection)}};
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string dataset_digest(const std::filesystem::path& dir, const std::string& name) {
    std::string bytes;
    for (const char* suffix :
         {"_A.txt", "_graph_indicator.txt", "_graph_labels.txt", "_node_labels.txt",
          "_edge_labels.txt"}) {
        const std::filesystem::path file = dir / (name + suffix);
        if (std::filesystem::exists(file)) {
            bytes += suffix;
            bytes += read_file_bytes(file);
        }
    }
    return fnv1a_hex(bytes);
}

std::string RunManifest::digest() const {
    std::ostringstream core;
    core << command << '\n'
         << config_text << '\n'
         << dataset_name << '\n'
         << dataset_digest << '\n'
         << seed << '\n'
         << tool_version << '\n';
    return fnv1a_hex(core.str());
}

std::string RunManifest::to_json() const {
    json doc{{"command", command},
             {"config", config_text},
             {"dataset", json{{"name", dataset_name}, {"digest", dataset_digest}}},
             {"seed", seed},
             {"tool", json{{"name", kToolName}, {"version", tool_version}}},
             {"manifest_digest", digest()},
             {"timings", timings_json(timings)}};
    return doc.dump(2) + "\n";
}

std::string selection_mode_name(SelectionMode mode) {
    switch (mode) {
        case SelectionMode::Loss:
            return "loss";
        case SelectionMode::MeanSmallest:
            return "mean";
        case SelectionMode::MeanLargest:
            return "mean_largest";
    }
    return "unknown";
}

std::string config_key_values(const CvConfig& config) {
    std::ostringstream out;
    out << "c_grid=";
    for (std::size_t i = 0; i < config.c_grid.size(); ++i) {
        if (i) out << ',';
        out << config.c_grid[i];
    }
    out << "\ndim=" << config.dim << "\ninner_folds=" << config.inner_folds
        << "\nlayers=" << config.layers << "\nouter_folds=" << config.outer_folds
        << "\nrepeats=" << config.repeats << "\nseed=" << config.seed
        << "\nselection=" << selection_mode_name(config.selection)
        << "\nthreads=" << config.threads << "\n";
    return out.str();
}

std::string report_to_json(const CvReport& report, const CvConfig& config,
                           const std::string& manifest_digest) {
    json folds = json::array();
    for (const FoldResult& f : report.folds) {
        folds.push_back(json{{"repeat", f.repeat},
                             {"fold", f.fold},
                             {"accuracy", f.accuracy},
                             {"chosen_c", f.chosen_c},
                             {"d_effective", f.d_effective},
                             {"vocab_size", f.vocab_size},
                             {"test_size", f.test_size}});
    }
    json doc{{"dataset", report.dataset_name},
             {"config", config_json(config)},
             {"folds", folds},
             {"mean_accuracy", report.mean_accuracy},
             {"std_accuracy", report.std_accuracy},
             {"table_cell", report.table_cell()},
             {"manifest_digest", manifest_digest}};
    return doc.dump(2) + "\n";
}

std::string summary_to_json(const DatasetSummary& summary, const ParseReport& report) {
    json classes = json::object();
    for (const auto& [cls, count] : summary.class_histogram) {
        classes[std::to_string(cls)] = count;
    }
    json doc{{"name", summary.name},
             {"graph_count", summary.graph_count},
             {"class_histogram", classes},
             {"has_node_labels", summary.has_node_labels},
             {"has_edge_labels", summary.has_edge_labels},
             {"node_label_alphabet", summary.node_label_alphabet},
             {"edge_label_alphabet", summary.edge_label_alphabet},
             {"vertices", json{{"min", summary.min_vertices},
                               {"max", summary.max_vertices},
                               {"mean", summary.mean_vertices}}},
             {"edges", json{{"min", summary.min_edges},
                            {"max", summary.max_edges},
                            {"mean", summary.mean_edges}}},
             {"parse", json{{"adjacency_lines", report.adjacency_lines},
                            {"dropped_self_loops", report.dropped_self_loops},
                            {"deduplicated_edges", report.deduplicated_edges},
                            {"asymmetric_edges", report.asymmetric_edges},
                            {"ignored_files", report.ignored_files}}}};
    return doc.dump(2) + "\n";
}

std::string embedding_sidecar_json(const std::vector<std::size_t>& vocab_per_layer,
                                   std::size_t d_requested, std::size_t d_effective,
                                   const std::vector<std::size_t>& selected,
                                   const std::string& selection_mode,
                                   const std::string& vocabulary_scope,
                                   const std::string& manifest_digest) {
    json doc{{"vocab_size_per_layer", vocab_per_layer},
             {"d_requested", d_requested},
             {"d_effective", d_effective},
             {"selected_indices", selected},
             {"selection_mode", selection_mode},
             {"vocabulary_scope", vocabulary_scope},
             {"manifest_digest", manifest_digest}};
    return doc.dump(2) + "\n";
}

}  // namespace apm
