#include "apm/pipeline.hpp"

#include <stdexcept>

namespace apm {

FittedPipeline fit_pipeline(std::span<const LabeledGraph> train_graphs,
                            const std::vector<int>& train_labels, std::size_t layers,
                            std::size_t d, SelectionMode mode) {
    if (train_graphs.size() != train_labels.size()) {
        throw std::invalid_argument("fit_pipeline: graphs/labels misaligned");
    }
    if (layers < 1) throw std::invalid_argument("fit_pipeline: layers must be >= 1");

    FittedPipeline p;
    p.interners.resize(layers);

    // Registration pass: every training graph, in order, grows the shared
    // per-layer vocabularies.
    std::vector<EmbeddingVector> embeddings;
    embeddings.reserve(train_graphs.size());
    std::vector<LayerStack> stacks;
    stacks.reserve(train_graphs.size());
    for (const LabeledGraph& g : train_graphs) {
        stacks.push_back(apm_multi_layer(g, p.interners));
    }
    for (LabelInterner& interner : p.interners) interner.freeze();

    p.vocab_size = p.interners.back().size();
    for (const LayerStack& stack : stacks) {
        embeddings.push_back(embed(stack, p.vocab_size));
    }

    const ClassWeights weights = fit_class_weights(embeddings, train_labels);
    std::vector<double> loss;
    switch (mode) {
        case SelectionMode::Loss:
            loss = compute_loss(weights);
            break;
        case SelectionMode::MeanSmallest:
            loss = mean_weight_loss(weights);
            break;
        case SelectionMode::MeanLargest: {
            loss = mean_weight_loss(weights);
            for (double& v : loss) v = -v;
            break;
        }
    }
    p.selection = select_top_d(std::move(loss), d);
    return p;
}

EmbeddingVector embed_with_pipeline(const FittedPipeline& pipeline, const LabeledGraph& g) {
    const LayerStack stack =
        apm_multi_layer(g, std::span<const LabelInterner>(pipeline.interners), OovPolicy::Skip);
    return embed(stack, pipeline.vocab_size);
}

Matrix feature_matrix(const FittedPipeline& pipeline, std::span<const LabeledGraph> graphs) {
    Matrix out(graphs.size(), pipeline.effective_dim());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const std::vector<double> row =
            apply_selection(embed_with_pipeline(pipeline, graphs[i]), pipeline.selection);
        std::copy(row.begin(), row.end(), out.row(i));
    }
    return out;
}

}  // namespace apm
