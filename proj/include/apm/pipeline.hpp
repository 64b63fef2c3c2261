#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "apm/embedding.hpp"
#include "apm/svm.hpp"

namespace apm {

enum class SelectionMode {
    Loss,          // selection loss, smallest wins
    MeanSmallest,  // mean-weight ablation, wired through the same smallest-wins path
    MeanLargest,   // mean-weight ablation, opposite reading
};

/*
 * Everything fit on a training set that test graphs must not influence:
 * the per-layer interners (frozen), the top-layer vocabulary size, and
 * the selected dimensions.
 */
struct FittedPipeline {
    std::vector<LabelInterner> interners;  // one per layer, all frozen
    std::size_t vocab_size = 0;
    SelectionResult selection;

    std::size_t layers() const { return interners.size(); }
    std::size_t effective_dim() const { return selection.selected.size(); }
};

// Builds per-layer vocabularies, embeds, fits class weights, scores every
// dimension per `mode`, and selects the top-d dimensions — from the given
// training graphs only.
FittedPipeline fit_pipeline(std::span<const LabeledGraph> train_graphs,
                            const std::vector<int>& train_labels, std::size_t layers,
                            std::size_t d, SelectionMode mode);

// Raw (unselected) embedding of one graph under a fitted pipeline's frozen
// vocabulary; unseen patterns are dropped.
EmbeddingVector embed_with_pipeline(const FittedPipeline& pipeline, const LabeledGraph& g);

// Selected feature rows for a set of graphs, ready for the classifier.
Matrix feature_matrix(const FittedPipeline& pipeline, std::span<const LabeledGraph> graphs);

}  // namespace apm
