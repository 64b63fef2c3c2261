#include "apm/embedding.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace apm {

EmbeddingVector::EmbeddingVector(std::vector<std::pair<Label, std::int64_t>> nonzeros,
                                 std::size_t vocab_size)
    : nonzeros_(std::move(nonzeros)), vocab_size_(vocab_size) {}

std::int64_t EmbeddingVector::at(std::size_t j) const {
    const Label label = static_cast<Label>(j);
    auto it = std::lower_bound(nonzeros_.begin(), nonzeros_.end(), label,
                               [](const auto& p, Label l) { return p.first < l; });
    return (it != nonzeros_.end() && it->first == label) ? it->second : 0;
}

std::int64_t EmbeddingVector::sum() const {
    return std::accumulate(nonzeros_.begin(), nonzeros_.end(), std::int64_t{0},
                           [](std::int64_t acc, const auto& p) { return acc + p.second; });
}

std::vector<std::int64_t> EmbeddingVector::to_dense() const {
    std::vector<std::int64_t> dense(vocab_size_, 0);
    for (const auto& [label, count] : nonzeros_) {
        dense[static_cast<std::size_t>(label)] = count;
    }
    return dense;
}

EmbeddingVector embed(const LayerStack& stack, std::size_t vocab_size) {
    std::map<Label, std::int64_t> counts;
    for (Label label : stack.top().vertex_labels) {
        if (static_cast<std::size_t>(label) >= vocab_size) continue;  // out-of-vocabulary
        ++counts[label];
    }
    return EmbeddingVector({counts.begin(), counts.end()}, vocab_size);
}

ClassWeights fit_class_weights(const std::vector<EmbeddingVector>& embeddings,
                               const std::vector<int>& labels) {
    if (embeddings.empty()) {
        throw std::invalid_argument("fit_class_weights: empty training set");
    }
    if (embeddings.size() != labels.size()) {
        throw std::invalid_argument("fit_class_weights: embeddings/labels misaligned");
    }
    const std::size_t dims = embeddings.front().vocab_size();
    for (const auto& e : embeddings) {
        if (e.vocab_size() != dims) {
            throw std::invalid_argument("fit_class_weights: embedding lengths differ");
        }
    }

    ClassWeights result;
    result.class_ids.assign(labels.begin(), labels.end());
    std::sort(result.class_ids.begin(), result.class_ids.end());
    result.class_ids.erase(std::unique(result.class_ids.begin(), result.class_ids.end()),
                           result.class_ids.end());
    result.weights.assign(result.class_ids.size(), std::vector<double>(dims, 0.0));

    for (std::size_t g = 0; g < embeddings.size(); ++g) {
        const std::size_t row =
            std::lower_bound(result.class_ids.begin(), result.class_ids.end(), labels[g]) -
            result.class_ids.begin();
        auto& w = result.weights[row];
        for (const auto& [label, count] : embeddings[g].nonzeros()) {
            w[static_cast<std::size_t>(label)] += static_cast<double>(count);
        }
    }
    return result;
}

std::vector<double> compute_loss(const ClassWeights& w) {
    if (w.num_classes() < 2) {
        throw std::invalid_argument("compute_loss: needs at least two classes");
    }
    const std::size_t dims = w.dims();
    std::vector<double> loss(dims, 0.0);
    for (std::size_t j = 0; j < dims; ++j) {
        double total = 0.0;
        for (const auto& row : w.weights) total += row[j];
        if (total == 0.0) {
            loss[j] = 0.0;  // no training signal in this dimension
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& row : w.weights) {
            const double diff = row[j] - (total - row[j]);
            best = std::max(best, -(diff * diff) / total);
        }
        loss[j] = best;
    }
    return loss;
}

std::vector<double> mean_weight_loss(const ClassWeights& w) {
    if (w.num_classes() < 1) {
        throw std::invalid_argument("mean_weight_loss: needs at least one class");
    }
    const std::size_t dims = w.dims();
    std::vector<double> mean(dims, 0.0);
    for (const auto& row : w.weights) {
        for (std::size_t j = 0; j < dims; ++j) mean[j] += row[j];
    }
    for (double& v : mean) v /= static_cast<double>(w.num_classes());
    return mean;
}

SelectionResult select_top_d(std::vector<double> loss, std::size_t d) {
    if (d < 1) throw std::invalid_argument("select_top_d: d must be >= 1");
    const std::size_t take = std::min(d, loss.size());

    std::vector<std::size_t> order(loss.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + take, order.end(),
                      [&loss](std::size_t a, std::size_t b) {
                          return loss[a] != loss[b] ? loss[a] < loss[b] : a < b;
                      });
    order.resize(take);
    std::sort(order.begin(), order.end());

    SelectionResult result;
    result.loss = std::move(loss);
    result.selected = std::move(order);
    result.d_requested = d;
    return result;
}

std::vector<double> apply_selection(const EmbeddingVector& e, const SelectionResult& sel) {
    if (e.vocab_size() != sel.loss.size()) {
        throw std::invalid_argument("apply_selection: embedding length " +
                                    std::to_string(e.vocab_size()) +
                                    " does not match selection length " +
                                    std::to_string(sel.loss.size()));
    }
    std::vector<double> out;
    out.reserve(sel.selected.size());
    for (std::size_t j : sel.selected) {
        out.push_back(static_cast<double>(e.at(j)));
    }
    return out;
}

}  // namespace apm
