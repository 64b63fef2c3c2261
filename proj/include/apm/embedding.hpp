#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "apm/transform.hpp"

namespace apm {

/*
 * Per-graph count vector over the top-layer vertex-label vocabulary.
 * Stored sparsely (a graph touches at most |V_K| of the vocab_size
 * dimensions) with the logical length kept alongside.
 */
class EmbeddingVector {
public:
    EmbeddingVector() = default;
    EmbeddingVector(std::vector<std::pair<Label, std::int64_t>> nonzeros, std::size_t vocab_size);

    std::size_t vocab_size() const { return vocab_size_; }
    std::int64_t at(std::size_t j) const;
    std::int64_t sum() const;
    const std::vector<std::pair<Label, std::int64_t>>& nonzeros() const { return nonzeros_; }
    std::vector<std::int64_t> to_dense() const;

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    std::vector<std::pair<Label, std::int64_t>> nonzeros_;  // sorted by label, counts > 0
    std::size_t vocab_size_ = 0;
};

// counts[j] = number of top-layer vertices labeled j. Labels >= vocab_size
// (out-of-vocabulary at test time) are skipped. An empty top layer embeds
// as the zero vector.
EmbeddingVector embed(const LayerStack& stack, std::size_t vocab_size);

/*
 * One weight row per class: the element-wise sum of the class's training
 * embeddings (exact integers, stored as reals).
 */
struct ClassWeights {
    std::vector<std::vector<double>> weights;  // C rows of vocab_size entries
    std::vector<int> class_ids;                // row order

    std::size_t num_classes() const { return weights.size(); }
    std::size_t dims() const { return weights.empty() ? 0 : weights.front().size(); }
};

// Throws std::invalid_argument on an empty training set or misaligned inputs.
ClassWeights fit_class_weights(const std::vector<EmbeddingVector>& embeddings,
                               const std::vector<int>& labels);

// Per-dimension selection loss: the maximum over classes i of
// -(w_i - sum_{j != i} w_j)^2 / sum_j w_j, element-wise. Entries are <= 0;
// a dimension whose weights sum to zero gets loss 0 (carries no signal).
// Requires at least two classes.
std::vector<double> compute_loss(const ClassWeights& w);

// Ablation replacement for the selection loss: the element-wise mean of the
// class weight rows.
std::vector<double> mean_weight_loss(const ClassWeights& w);

struct SelectionResult {
    std::vector<double> loss;
    std::vector<std::size_t> selected;  // strictly increasing, size min(d, dims)
    std::size_t d_requested = 0;
};

// The min(d, loss.size()) indices of smallest loss, ties broken by ascending
// index, returned sorted ascending.
SelectionResult select_top_d(std::vector<double> loss, std::size_t d);

// Sub-vector of counts at the selected indices, ascending.
std::vector<double> apply_selection(const EmbeddingVector& e, const SelectionResult& sel);

}  // namespace apm
