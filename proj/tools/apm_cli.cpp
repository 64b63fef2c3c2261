#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "apm/cross_validation.hpp"
#include "apm/json_io.hpp"
#include "apm/pipeline.hpp"
#include "apm/tu_dataset.hpp"

namespace fs = std::filesystem;

namespace {

std::string dataset_name_for(const fs::path& dir, const std::string& explicit_name) {
    if (!explicit_name.empty()) return explicit_name;
    fs::path p = dir;
    if (p.filename().empty()) p = p.parent_path();  // tolerate trailing '/'
    return p.filename().string();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

apm::SelectionMode selection_mode_from(const std::string& selection,
                                       const std::string& mean_direction) {
    if (selection == "loss") return apm::SelectionMode::Loss;
    if (mean_direction == "largest") return apm::SelectionMode::MeanLargest;
    return apm::SelectionMode::MeanSmallest;
}

void print_summary(const apm::DatasetSummary& s, const apm::ParseReport& r) {
    std::cout << "dataset:            " << s.name << "\n"
              << "graphs:             " << s.graph_count << "\n"
              << "classes:            ";
    bool first = true;
    for (const auto& [cls, count] : s.class_histogram) {
        if (!first) std::cout << ", ";
        std::cout << cls << ":" << count;
        first = false;
    }
    std::cout << "\n"
              << "node labels:        " << (s.has_node_labels ? "present" : "absent")
              << " (alphabet " << s.node_label_alphabet << ")\n"
              << "edge labels:        " << (s.has_edge_labels ? "present" : "absent")
              << " (alphabet " << s.edge_label_alphabet << ")\n"
              << "vertices per graph: min " << s.min_vertices << ", max " << s.max_vertices
              << ", mean " << s.mean_vertices << "\n"
              << "edges per graph:    min " << s.min_edges << ", max " << s.max_edges
              << ", mean " << s.mean_edges << "\n"
              << "parse:              " << r.adjacency_lines << " adjacency lines, "
              << r.deduplicated_edges << " deduplicated, " << r.dropped_self_loops
              << " self-loops dropped, " << r.asymmetric_edges << " one-directional\n";
    if (!r.ignored_files.empty()) {
        std::cout << "ignored files:      ";
        for (std::size_t i = 0; i < r.ignored_files.size(); ++i) {
            if (i) std::cout << ", ";
            std::cout << r.ignored_files[i];
        }
        std::cout << "\n";
    }
}

int cmd_inspect(const fs::path& dir, const std::string& name_flag, const fs::path& out) {
    const std::string name = dataset_name_for(dir, name_flag);
    const apm::TUDataset ds = apm::parse_tud(dir, name);
    const apm::DatasetSummary summary = apm::dataset_summary(ds);
    print_summary(summary, ds.report);

    apm::RunManifest manifest;
    manifest.command = "inspect";
    manifest.config_text = "";
    manifest.dataset_name = name;
    manifest.dataset_digest = apm::dataset_digest(dir, name);
    const std::string json = apm::summary_to_json(summary, ds.report);
    std::cout << json;
    if (!out.empty()) {
        write_text_file(out, json);
        write_text_file(fs::path(out.string() + ".manifest.json"), manifest.to_json());
    }
    return 0;
}

int cmd_embed(const fs::path& dir, const std::string& name_flag, std::size_t layers,
              std::size_t dim, bool no_select, const std::string& selection,
              const std::string& mean_direction, const fs::path& out) {
    const std::string name = dataset_name_for(dir, name_flag);
    const apm::TUDataset ds = apm::parse_tud(dir, name);
    const apm::SelectionMode mode = selection_mode_from(selection, mean_direction);

    // Exploratory mode: the vocabulary is fit on the full dataset. For
    // leakage-free evaluation use `classify`, which refits per fold.
    std::cerr << "note: vocabulary fit on the full dataset (exploratory mode, not the "
                 "cross-validated path)\n";

    const std::size_t d = no_select ? std::numeric_limits<std::size_t>::max() : dim;
    const apm::FittedPipeline pipeline =
        apm::fit_pipeline(ds.graphs, ds.class_labels, layers, d, mode);

    if (dim > pipeline.vocab_size && !no_select) {
        std::cerr << "warning: requested dim " << dim << " exceeds vocabulary size "
                  << pipeline.vocab_size << "; emitting all " << pipeline.vocab_size
                  << " dimensions\n";
    }

    std::ostringstream csv;
    csv << "graph_id,class";
    for (std::size_t j : pipeline.selection.selected) csv << ",dim_" << j;
    csv << "\n";
    for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
        const apm::EmbeddingVector e = apm::embed_with_pipeline(pipeline, ds.graphs[g]);
        csv << g + 1 << "," << ds.class_labels[g];
        for (std::size_t j : pipeline.selection.selected) csv << "," << e.at(j);
        csv << "\n";
    }

    apm::RunManifest manifest;
    manifest.command = "embed";
    {
        std::ostringstream cfg;
        cfg << "dim=" << (no_select ? std::string("all") : std::to_string(dim))
            << "\nlayers=" << layers << "\nselection=" << apm::selection_mode_name(mode) << "\n";
        manifest.config_text = cfg.str();
    }
    manifest.dataset_name = name;
    manifest.dataset_digest = apm::dataset_digest(dir, name);

    std::vector<std::size_t> vocab_per_layer;
    for (const apm::LabelInterner& interner : pipeline.interners) {
        vocab_per_layer.push_back(interner.size());
    }

    write_text_file(out, csv.str());
    write_text_file(fs::path(out.string() + ".meta.json"),
                    apm::embedding_sidecar_json(
                        vocab_per_layer, no_select ? pipeline.vocab_size : dim,
                        pipeline.effective_dim(), pipeline.selection.selected,
                        apm::selection_mode_name(mode), "full_dataset_exploratory",
                        manifest.digest()));
    write_text_file(fs::path(out.string() + ".manifest.json"), manifest.to_json());
    std::cout << "wrote " << ds.graphs.size() << " embeddings x " << pipeline.effective_dim()
              << " dims to " << out.string() << "\n";
    return 0;
}

int cmd_classify(const fs::path& dir, const std::string& name_flag, apm::CvConfig config,
                 const std::string& selection, const std::string& mean_direction,
                 const fs::path& out) {
    const std::string name = dataset_name_for(dir, name_flag);
    config.selection = selection_mode_from(selection, mean_direction);
    config.check();

    const apm::TUDataset ds = apm::parse_tud(dir, name);
    const apm::CvReport report = apm::nested_cv(ds, config);

    apm::RunManifest manifest;
    manifest.command = "classify";
    manifest.config_text = apm::config_key_values(config);
    manifest.dataset_name = name;
    manifest.dataset_digest = apm::dataset_digest(dir, name);
    manifest.timings = report.timings;

    std::cout << "dataset  layers  dim  selection  accuracy\n"
              << name << "  " << config.layers << "  " << config.dim << "  "
              << apm::selection_mode_name(config.selection) << "  " << report.table_cell()
              << "\n";
    std::cerr << "folds: " << report.folds.size() << ", wall clock "
              << report.timings.total_seconds << " s (pipeline "
              << report.timings.pipeline_seconds << " s, grid search "
              << report.timings.model_selection_seconds << " s, evaluation "
              << report.timings.evaluation_seconds << " s)\n";

    if (!out.empty()) {
        write_text_file(out, apm::report_to_json(report, config, manifest.digest()));
        write_text_file(fs::path(out.string() + ".manifest.json"), manifest.to_json());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph classification by multi-layer adjacent point merging"};
    app.set_version_flag("--version", std::string(apm::kToolName) + " " + apm::kToolVersion);
    app.require_subcommand(1);

    std::string dataset_dir;
    std::string name;
    std::string out;

    auto* inspect = app.add_subcommand("inspect", "Parse a TU-format dataset and summarize it");
    inspect->add_option("dir", dataset_dir, "dataset directory")->required();
    inspect->add_option("--name", name, "dataset name (default: directory basename)");
    inspect->add_option("--out", out, "write the JSON summary to this path");

    std::size_t layers = 2;
    std::size_t dim = 100;
    bool no_select = false;
    std::string selection = "loss";
    std::string mean_direction = "smallest";

    auto* embed = app.add_subcommand("embed", "Write pattern-count embeddings as CSV");
    embed->add_option("dir", dataset_dir, "dataset directory")->required();
    embed->add_option("--name", name, "dataset name (default: directory basename)");
    embed->add_option("--layers", layers, "merge layers K")->check(CLI::PositiveNumber);
    embed->add_option("--dim", dim, "selected dimensions D")->check(CLI::PositiveNumber);
    embed->add_flag("--no-select", no_select, "emit every vocabulary dimension");
    embed->add_option("--selection", selection, "dimension scoring: loss|mean")
        ->check(CLI::IsMember({"loss", "mean"}));
    embed->add_option("--mean-direction", mean_direction,
                      "mean ablation direction: smallest|largest")
        ->check(CLI::IsMember({"smallest", "largest"}));
    embed->add_option("--out", out, "CSV output path")->required();

    apm::CvConfig config;
    std::string grid_text;

    auto* classify = app.add_subcommand("classify", "Nested cross-validated accuracy");
    classify->add_option("dir", dataset_dir, "dataset directory")->required();
    classify->add_option("--name", name, "dataset name (default: directory basename)");
    classify->add_option("--layers", layers, "merge layers K")->check(CLI::PositiveNumber);
    classify->add_option("--dim", dim, "selected dimensions D")->check(CLI::PositiveNumber);
    classify->add_option("--repeats", config.repeats, "cross-validation repetitions");
    classify->add_option("--folds", config.outer_folds, "outer folds");
    classify->add_option("--inner-folds", config.inner_folds, "inner folds for the C grid");
    classify->add_option("--grid", grid_text, "comma-separated C grid");
    classify->add_option("--seed", config.seed, "random seed");
    classify->add_option("--selection", selection, "dimension scoring: loss|mean")
        ->check(CLI::IsMember({"loss", "mean"}));
    classify->add_option("--mean-direction", mean_direction,
                         "mean ablation direction: smallest|largest")
        ->check(CLI::IsMember({"smallest", "largest"}));
    classify->add_option("--threads", config.threads, "worker threads");
    classify->add_option("--out", out, "report JSON path");
    classify->set_config("--config", "", "flat key=value config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (inspect->parsed()) {
            return cmd_inspect(dataset_dir, name, out);
        }
        if (embed->parsed()) {
            return cmd_embed(dataset_dir, name, layers, dim, no_select, selection,
                             mean_direction, out);
        }
        if (classify->parsed()) {
            if (!grid_text.empty()) {
                config.c_grid.clear();
                std::stringstream ss(grid_text);
                std::string token;
                while (std::getline(ss, token, ',')) {
                    config.c_grid.push_back(std::stod(token));
                }
            }
            config.layers = layers;
            config.dim = dim;
            return cmd_classify(dataset_dir, name, config, selection, mean_direction, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
