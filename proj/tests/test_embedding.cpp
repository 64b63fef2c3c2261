#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"

#include "apm/embedding.hpp"
#include "test_support.hpp"

using namespace apm;
using namespace apm::testing;

namespace {

EmbeddingVector dense_embedding(const std::vector<std::int64_t>& counts) {
    std::vector<std::pair<Label, std::int64_t>> nz;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] != 0) nz.emplace_back(static_cast<Label>(j), counts[j]);
    }
    return EmbeddingVector(std::move(nz), counts.size());
}

ClassWeights weights_2x1(double w1, double w2) {
    ClassWeights w;
    w.class_ids = {0, 1};
    w.weights = {{w1}, {w2}};
    return w;
}

LayerStack stack_with_top_labels(std::vector<Label> labels) {
    LabeledGraph top;
    top.num_vertices = static_cast<VertexId>(labels.size());
    top.vertex_labels = std::move(labels);
    top.layer = 1;
    top.edge_labels.emplace();
    LayerStack stack;
    stack.graphs.push_back(top);
    return stack;
}

// Direct scalar-loop evaluation of the selection loss, kept deliberately
// independent of compute_loss.
std::vector<double> loss_oracle(const ClassWeights& w) {
    std::vector<double> out(w.dims());
    for (std::size_t j = 0; j < w.dims(); ++j) {
        double best = -std::numeric_limits<double>::infinity();
        double total = 0;
        for (std::size_t i = 0; i < w.num_classes(); ++i) total += w.weights[i][j];
        if (total == 0) {
            out[j] = 0;
            continue;
        }
        for (std::size_t i = 0; i < w.num_classes(); ++i) {
            double others = 0;
            for (std::size_t k = 0; k < w.num_classes(); ++k) {
                if (k != i) others += w.weights[k][j];
            }
            const double f = -std::pow(w.weights[i][j] - others, 2.0) / total;
            if (f > best) best = f;
        }
        out[j] = best;
    }
    return out;
}

}  // namespace

TEST_CASE("embed counts top-layer vertex labels") {
    const EmbeddingVector e = embed(stack_with_top_labels({0, 0, 1}), 2);
    CHECK(e.to_dense() == std::vector<std::int64_t>{2, 1});
    CHECK(e.sum() == 3);
}

TEST_CASE("embedding an empty top layer is the zero vector") {
    const EmbeddingVector e = embed(stack_with_top_labels({}), 4);
    CHECK(e.to_dense() == std::vector<std::int64_t>{0, 0, 0, 0});
    CHECK(e.sum() == 0);
}

TEST_CASE("out-of-vocabulary top-layer labels are skipped") {
    const EmbeddingVector e = embed(stack_with_top_labels({0, 5, 0}), 2);
    CHECK(e.to_dense() == std::vector<std::int64_t>{2, 0});
    CHECK(e.sum() == 2);
}

TEST_CASE("embedding sums equal top-layer vertex counts on random graphs") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const LabeledGraph g = random_simple_graph(rng, 9, 0.4, 3, 2);
        std::vector<LabelInterner> interners(2);
        const LayerStack stack = apm_multi_layer(g, interners);
        const EmbeddingVector e = embed(stack, interners.back().size());
        CHECK(e.sum() == stack.top().num_vertices);
    }
}

TEST_CASE("class weights are element-wise class sums") {
    const std::vector<EmbeddingVector> embeddings = {
        dense_embedding({1, 2}), dense_embedding({3, 0}), dense_embedding({5, 1})};
    const std::vector<int> labels = {1, 1, 2};
    const ClassWeights w = fit_class_weights(embeddings, labels);

    REQUIRE(w.class_ids == std::vector<int>{1, 2});
    CHECK(w.weights[0] == std::vector<double>{4, 2});
    CHECK(w.weights[1] == std::vector<double>{5, 1});
}

TEST_CASE("class weights ignore graph order") {
    std::mt19937_64 rng(11);
    std::vector<EmbeddingVector> embeddings;
    std::vector<int> labels;
    std::uniform_int_distribution<std::int64_t> count(0, 9);
    std::uniform_int_distribution<int> cls(0, 2);
    for (int i = 0; i < 40; ++i) {
        embeddings.push_back(dense_embedding({count(rng), count(rng), count(rng)}));
        labels.push_back(cls(rng));
    }
    const ClassWeights base = fit_class_weights(embeddings, labels);

    std::vector<std::size_t> order(embeddings.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<EmbeddingVector> shuffled_e;
    std::vector<int> shuffled_l;
    for (std::size_t i : order) {
        shuffled_e.push_back(embeddings[i]);
        shuffled_l.push_back(labels[i]);
    }
    const ClassWeights shuffled = fit_class_weights(shuffled_e, shuffled_l);
    CHECK(base.weights == shuffled.weights);
    CHECK(base.class_ids == shuffled.class_ids);
}

TEST_CASE("fit_class_weights rejects an empty training set") {
    CHECK_THROWS_AS(fit_class_weights({}, {}), std::invalid_argument);
}

TEST_CASE("selection loss reproduces the squared-numerator ordering") {
    const std::vector<double> small = compute_loss(weights_2x1(1, 0));
    CHECK(small[0] == doctest::Approx(-1.0).epsilon(1e-12));

    const std::vector<double> large = compute_loss(weights_2x1(100, 1));
    CHECK(large[0] == doctest::Approx(-9801.0 / 101.0).epsilon(1e-12));
    CHECK(large[0] < small[0]);  // heavier dimension scores strictly better
}

TEST_CASE("selection loss vanishes when classes balance") {
    ClassWeights w;
    w.class_ids = {0, 1};
    w.weights = {{5, 5}, {5, 5}};
    CHECK(compute_loss(w) == std::vector<double>{0, 0});
}

TEST_CASE("zero-sum dimensions get the worst loss") {
    ClassWeights w;
    w.class_ids = {0, 1};
    w.weights = {{0, 3}, {0, 1}};
    const std::vector<double> loss = compute_loss(w);
    CHECK(loss[0] == 0.0);
    CHECK(loss[1] < 0.0);
}

TEST_CASE("selection loss needs two classes") {
    ClassWeights w;
    w.class_ids = {0};
    w.weights = {{1, 2}};
    CHECK_THROWS_AS(compute_loss(w), std::invalid_argument);
    CHECK(mean_weight_loss(w) == std::vector<double>{1, 2});  // mean is fine with one class
}

TEST_CASE("selection loss is never positive; mean weight never negative") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> weight(0.0, 50.0);
    std::uniform_int_distribution<std::size_t> classes(2, 4), dims(1, 20);
    for (int trial = 0; trial < 200; ++trial) {
        ClassWeights w;
        const std::size_t c = classes(rng), d = dims(rng);
        for (std::size_t i = 0; i < c; ++i) {
            w.class_ids.push_back(static_cast<int>(i));
            std::vector<double> row(d);
            for (double& v : row) v = weight(rng);
            w.weights.push_back(std::move(row));
        }
        for (double v : compute_loss(w)) CHECK(v <= 0.0);
        for (double v : mean_weight_loss(w)) CHECK(v >= 0.0);
    }
}

TEST_CASE("selection loss matches the scalar-loop oracle") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> weight(0.0, 100.0);
    std::uniform_int_distribution<std::size_t> classes(2, 4), dims(1, 20);
    for (int trial = 0; trial < 300; ++trial) {
        ClassWeights w;
        const std::size_t c = classes(rng), d = dims(rng);
        for (std::size_t i = 0; i < c; ++i) {
            w.class_ids.push_back(static_cast<int>(i));
            std::vector<double> row(d);
            for (double& v : row) v = weight(rng);
            w.weights.push_back(std::move(row));
        }
        const std::vector<double> fast = compute_loss(w);
        const std::vector<double> slow = loss_oracle(w);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t j = 0; j < fast.size(); ++j) {
            CHECK(fast[j] == doctest::Approx(slow[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("loss is invariant under class row permutation") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> weight(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        ClassWeights w;
        for (int i = 0; i < 3; ++i) {
            w.class_ids.push_back(i);
            w.weights.push_back({weight(rng), weight(rng), weight(rng), weight(rng)});
        }
        ClassWeights permuted = w;
        std::shuffle(permuted.weights.begin(), permuted.weights.end(), rng);
        CHECK(compute_loss(w) == compute_loss(permuted));
    }
}

TEST_CASE("mean weight loss is the element-wise class mean") {
    ClassWeights w;
    w.class_ids = {0, 1};
    w.weights = {{2, 4}, {0, 4}};
    CHECK(mean_weight_loss(w) == std::vector<double>{1, 4});

    ClassWeights zero;
    zero.class_ids = {0, 1};
    zero.weights = {{0, 0}, {0, 0}};
    CHECK(mean_weight_loss(zero) == std::vector<double>{0, 0});
}

TEST_CASE("select_top_d keeps the smallest-loss dimensions") {
    const SelectionResult r = select_top_d({-5, 0, -2}, 2);
    CHECK(r.selected == std::vector<std::size_t>{0, 2});
    CHECK(r.d_requested == 2);
}

TEST_CASE("select_top_d degenerates to all dimensions") {
    const SelectionResult r = select_top_d({-1, -3}, 10);
    CHECK(r.selected == std::vector<std::size_t>{0, 1});
}

TEST_CASE("select_top_d breaks ties by ascending index") {
    const SelectionResult r = select_top_d({-1, -1, -1}, 2);
    CHECK(r.selected == std::vector<std::size_t>{0, 1});
}

TEST_CASE("scaling every embedding scales the loss but not the selection") {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<std::int64_t> count(0, 20);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<EmbeddingVector> embeddings;
        std::vector<int> labels;
        for (int g = 0; g < 12; ++g) {
            embeddings.push_back(
                dense_embedding({count(rng), count(rng), count(rng), count(rng), count(rng)}));
            labels.push_back(g % 2);
        }
        const std::vector<double> base_loss = compute_loss(fit_class_weights(embeddings, labels));

        const double c = 3.0;
        ClassWeights scaled = fit_class_weights(embeddings, labels);
        for (auto& row : scaled.weights) {
            for (double& v : row) v *= c;
        }
        const std::vector<double> scaled_loss = compute_loss(scaled);
        REQUIRE(scaled_loss.size() == base_loss.size());
        for (std::size_t j = 0; j < base_loss.size(); ++j) {
            CHECK(scaled_loss[j] == doctest::Approx(c * base_loss[j]).epsilon(1e-9));
        }

        // tie-free check of selection invariance
        std::set<double> distinct(base_loss.begin(), base_loss.end());
        if (distinct.size() == base_loss.size()) {
            CHECK(select_top_d(base_loss, 3).selected == select_top_d(scaled_loss, 3).selected);
        }
    }
}

TEST_CASE("apply_selection projects counts onto the selected dimensions") {
    const SelectionResult sel = select_top_d({-5, 0, -2}, 2);
    CHECK(apply_selection(dense_embedding({7, 3, 9}), sel) == std::vector<double>{7, 9});

    const SelectionResult all = select_top_d({-5, 0, -2}, 3);
    CHECK(apply_selection(dense_embedding({7, 3, 9}), all) == std::vector<double>{7, 3, 9});
    CHECK(apply_selection(dense_embedding({0, 0, 0}), sel) == std::vector<double>{0, 0});

    CHECK_THROWS_AS(apply_selection(dense_embedding({1, 2}), sel), std::invalid_argument);
}
